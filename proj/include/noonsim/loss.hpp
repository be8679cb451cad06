#pragma once

#include <utility>

#include "noonsim/fock.hpp"
#include "noonsim/husimi.hpp"

namespace noonsim {

// Joint photon-number probabilities of an ensemble, square grid.
struct JointDistribution {
  std::vector<double> p;  // row-major, n1 major
  int dim = 0;

  double at(int n1, int n2) const {
    return p[static_cast<size_t>(n1) * dim + n2];
  }
};

// Photon loss of transmittance tau_prime applied independently to both
// modes, decomposed into (k1, k2) lost-photon branches. Branch weights sum
// to 1 minus whatever was pruned (threshold 1e-12, kept on the books).
StateEnsemble transmission_loss(const PureState2& s, double tau_prime);

// Same channel for the heralded interferometer output, but with the loss
// commuted through the final beam splitter: the coherent arm is a fixed
// point of loss up to rescaling lambda -> sqrt(tau') lambda, so only the
// subtracted-squeezed arm branches. Far fewer branches than the direct
// decomposition; agreement with it is a test.
StateEnsemble transmission_loss_commuted(const ModeParams& p,
                                         double tau_prime);

// Heralding on m clicks at a photon-number detector of efficiency eta:
// mixture of the true-subtraction states with binomial weights. Returns the
// ensemble and the overall herald probability. mprime_cutoff = 0 picks the
// cutoff automatically (and verifies it); an explicit cutoff must pass the
// same adequacy check.
std::pair<StateEnsemble, double> herald_with_inefficiency(
    const ModeParams& p, double eta, int mprime_cutoff = 0);

JointDistribution lossy_distribution(const ModeParams& p, double tau_prime);

double ensemble_mean_photon(const StateEnsemble& e);
double ensemble_off_edge_mass(const StateEnsemble& e, int k);

// Direct Gaussian-integral form of the lossy Q-function: smear the lossless
// Q with the vacuum that the hypothetical loss beam splitters mix in,
// evaluated by Gauss-Hermite quadrature (nodes per real axis). Slow and
// only sensible at small dim; the branch decomposition is the product
// path, this is its independent check.
double q_lossy_quadrature(const PureState2& s, double tau_prime,
                          const PhasePoint& p, int gh_nodes = 24);

}  // namespace noonsim
