#pragma once

#include <complex>
#include <utility>
#include <vector>

#include "noonsim/errors.hpp"

namespace noonsim {

using cplx = std::complex<double>;

// Single-mode state in the truncated Fock basis. amps[n] is the amplitude
// of |n>. States may be sub-normalized (truncation cuts a tail, heralding
// leaves the raw projected norm); norm_sq() reports the actual mass.
struct PureState1 {
  std::vector<cplx> amps;

  int dim() const { return static_cast<int>(amps.size()); }
  double norm_sq() const;
};

// Two-mode state, square truncation, row-major: amp(n1, n2) = amps[n1*dim+n2].
struct PureState2 {
  std::vector<cplx> amps;
  int dim = 0;

  cplx& at(int n1, int n2) { return amps[static_cast<size_t>(n1) * dim + n2]; }
  const cplx& at(int n1, int n2) const {
    return amps[static_cast<size_t>(n1) * dim + n2];
  }
  double norm_sq() const;
};

// Classical mixture of pure two-mode states, the output of a loss channel
// or of an inefficient-detector herald. Branch weights are probabilities;
// they need not sum to 1 exactly when branches were pruned, and the pruned
// mass is kept on the books.
struct StateEnsemble {
  struct Branch {
    double weight = 0.0;
    PureState2 state;  // normalized
  };
  std::vector<Branch> branches;
  double pruned_weight = 0.0;

  double total_weight() const;
};

// The four knobs of the heralding scheme: squeezing zeta into mode 1,
// displacement lambda into mode 2, tap transmittance tau, click count m.
struct ModeParams {
  cplx zeta;
  cplx lambda;
  double tau = 0.9;
  int m = 0;

  void validate() const;  // throws std::invalid_argument
};

// Default truncation seed for a state of mean photon number mu. The seed is
// verified and grown by the constructors until the walked-off tail mass is
// below kTailTol, so it only has to be a decent starting point.
int auto_dim(double mean_photon);

inline constexpr double kTailTol = 1e-12;

// Constructors. dim == 0 means auto-size (grow until the truncation deficit
// 1 - sum|amps|^2 is below kTailTol, then trim). An explicit dim that cannot
// hold the state throws TruncationError with the achieved tail mass.
PureState1 make_coherent(cplx lambda, int dim = 0);
PureState1 make_squeezed_vacuum(cplx zeta, int dim = 0);
PureState1 make_displaced_squeezed(cplx lambda, cplx zeta, int dim = 0);
PureState1 make_fock(int n, int dim);
PureState1 make_vacuum(int dim);

PureState2 tensor(const PureState1& a, const PureState1& b);

std::vector<double> photon_distribution(const PureState1& s);
std::vector<double> photon_distribution(const PureState2& s);  // row-major

double mean_photon(const PureState1& s);
double mean_photon(const PureState2& s);  // total n1 + n2
double mean_photon_mode(const PureState2& s, int mode);

cplx inner(const PureState1& a, const PureState1& b);
cplx inner(const PureState2& a, const PureState2& b);

std::pair<PureState1, double> normalize(const PureState1& s);
std::pair<PureState2, double> normalize(const PureState2& s);

// Drop the high-n tail keeping relative mass loss below tol.
PureState1 trim(const PureState1& s, double tol = kTailTol);
PureState2 trim(const PureState2& s, double tol = kTailTol);

// Hard truncation to a given dim, renormalized. For building small test
// states; this deliberately discards mass.
PureState2 truncate_to(const PureState2& s, int dim);

// Fraction of probability mass with min(n1, n2) >= k. The photon-number
// grid of a N00N-like state hugs the two axes, so this is the natural
// "how un-N00N is it" number.
double off_edge_mass(const PureState2& s, int k);

}  // namespace noonsim
