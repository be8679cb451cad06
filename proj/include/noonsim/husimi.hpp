#pragma once

#include "noonsim/fock.hpp"

namespace noonsim {

struct PhasePoint {
  cplx a1{0.0, 0.0};
  cplx a2{0.0, 0.0};
};

// Coherent-state amplitude row <n|alpha> for n = 0..dim-1. Uses the plain
// recurrence normally and a per-entry log-domain evaluation when
// exp(-|alpha|^2/2) itself would underflow. The _into form writes dim
// entries to a caller-owned buffer (hot loops keep a workspace).
std::vector<cplx> coherent_row(cplx alpha, int dim);
void coherent_row_into(cplx alpha, int dim, cplx* out);

// Q(a1, a2) = |<a1, a2|s>|^2 / pi^2 for pure states; weighted branch sum
// for ensembles. err_bound, when given, receives a bound on the overlap
// mass that the Fock truncation cannot see at this phase-space point.
double q_two_mode(const PureState2& s, const PhasePoint& p,
                  double* err_bound = nullptr);
double q_two_mode(const StateEnsemble& e, const PhasePoint& p,
                  double* err_bound = nullptr);

// The single-setting quantity: pi * integral of Q over the other mode,
// resolved exactly as a Fock sum (no quadrature). mode selects which mode
// the argument refers to.
double q_marginal(const PureState2& s, cplx a, int mode,
                  double* err_bound = nullptr);
double q_marginal(const StateEnsemble& e, cplx a, int mode,
                  double* err_bound = nullptr);

// Gaussian Q of a displaced squeezed state |lambda, zeta> in quadrature
// form: prefactor * exp(-2 c V^{-1} c^T), c = (Re(a-lambda), Im(a-lambda)).
struct GaussianQ {
  cplx center;
  double v[2][2];
  double prefactor;

  static GaussianQ from_params(cplx lambda, cplx zeta);
  double eval(cplx alpha) const;
};

// Same quantity in the directly simplified exponent form
// exp(-|w|^2 - tanh r * Re(w^2 e^{-i phi})) / (pi cosh r), w = alpha-lambda.
// Equal to GaussianQ::eval to rounding; both forms are kept so they can
// check each other.
double q_analytic_squeezed_coherent(cplx alpha, cplx lambda, cplx zeta);

// Closed form for the single-mode Q of the m-photon-subtracted squeezed
// state: the herald projector's delta-derivative expansion is reduced to a
// polynomial-times-Gaussian. The unnormalized variant integrates to the
// herald probability; the normalized one divides that out. Supports m <= 16.
double q_analytic_subtracted_unnormalized(cplx alpha, cplx zeta, double tau,
                                          int m);
double q_analytic_subtracted(cplx alpha, cplx zeta, double tau, int m);

// Two-mode Q of the heralded output state in product form: the 50/50 mixer
// factorizes Q into difference and sum arms.
double q_analytic_output(const PhasePoint& p, cplx zeta, cplx lambda,
                         double tau, int m);

// Herald probability recovered by adaptive quadrature of the unnormalized
// analytic Q. Slow; exists as an independent cross-check of the Fock-side
// closed form.
double herald_prob_analytic(cplx zeta, double tau, int m,
                            double abs_tol = 1e-12);

}  // namespace noonsim
