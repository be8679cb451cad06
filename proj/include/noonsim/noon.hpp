#pragma once

#include "noonsim/fock.hpp"
#include "noonsim/interferometer.hpp"

namespace noonsim {

// The heralded output's edge distribution P_N (probability of the |N>|0>
// component) and its moments. This is the distribution whose shape the
// scheme is designed to control.
struct PhotonStats {
  std::vector<double> P;
  double mean = 0.0;
  double stddev = 0.0;
};

PhotonStats stats_from_probs(std::vector<double> unnormalized);

// P_N proportional to |amp(N, 0)|^2.
PhotonStats edge_marginal(const PureState2& s);

// Ideal target: a coherent superposition of N00N states weighted by P_N,
//   i^m sqrt(P_0)|0,0> + sum_N i^{N+m} sqrt(P_N/2) (|N,0> + (-1)^m |0,N>).
PureState2 noon_superposition(const PhotonStats& stats, int m, int dim = 0);

// |<a|b>| with automatic dimension promotion.
double fidelity(const PureState2& a, const PureState2& b);

struct LambdaOpt {
  cplx lambda_opt;
  double f_max = 0.0;
};

// Best coherent displacement for the N00N-superposition overlap, at fixed
// squeezing/tap/clicks. The search runs along the imaginary axis (where
// every optimum of interest lies); full_complex refines over the whole
// plane afterwards.
LambdaOpt optimize_lambda(cplx zeta, double tau, int m,
                          bool full_complex = false);

// Fidelity of |psi_m> against its ideal superposition for explicit lambda.
// Shares the edge-amplitude fast path with optimize_lambda.
double noon_fidelity(cplx zeta, cplx lambda, double tau, int m);

struct CatComparison {
  double f_cat = 0.0;   // best |<cat|zeta_m>| over amplitude and parity
  double f_noon = 0.0;  // optimize_lambda(...).f_max
};

CatComparison cat_comparison(cplx zeta, double tau, int m);

}  // namespace noonsim
