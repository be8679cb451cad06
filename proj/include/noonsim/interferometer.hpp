#pragma once

#include <utility>

#include "noonsim/fock.hpp"

namespace noonsim {

// Result of a conditional (heralded) state preparation. herald_prob is the
// success probability of the conditioning detection; state is normalized.
struct HeraldOutcome1 {
  PureState1 state;
  double herald_prob = 0.0;
};

struct HeraldOutcome2 {
  PureState2 state;
  double herald_prob = 0.0;
};

// Two-mode beam splitter U = exp[theta (a1^dag a2 - a2^dag a1)] with
// theta = arccos(sqrt(tau)). Exactly unitary: the output grid grows to
// cover every populated total-photon sector. inverse=true applies U^dag.
PureState2 beam_splitter(const PureState2& s, double tau,
                         bool inverse = false);

// Amplitudes on the two edges (N,0) and (0,N) of the 50/50 beam splitter
// output for product input a (x) b, without forming the full grid. This is
// what the edge-marginal fidelity optimization loops over, so it matters
// that it is O(dim^2) instead of O(dim^3).
struct EdgeAmplitudes {
  std::vector<cplx> n0;  // amplitude on |N>|0>
  std::vector<cplx> zn;  // amplitude on |0>|N>
};
EdgeAmplitudes beam_splitter_edges_half(const PureState1& a,
                                        const PureState1& b);

// Heralded photon subtraction: tap beam splitter of transmittance tau on the
// squeezed mode, detect exactly m photons in the tap. Closed form in the
// Fock basis; herald_prob is the squared norm of the projection and does not
// depend on what enters the other interferometer port.
HeraldOutcome1 subtract_photons(cplx zeta, double tau, int m);

// Herald probability alone (cheap; no state is built).
double herald_prob(cplx zeta, double tau, int m);

// 50/50 mixing of squeezed vacuum and coherent light, no subtraction.
PureState2 psi_state(cplx zeta, cplx lambda, int dim = 0);

// Full pipeline: subtract m photons from the squeezed mode, then 50/50 mix
// with the coherent state. dim == 0 auto-sizes and trims; dim > 0 hard-caps
// the per-mode truncation of the result (renormalized).
HeraldOutcome2 psi_m_state(const ModeParams& p, int dim = 0);

// Entangled coherent state (|lambda>|0> + sign |0>|lambda>), normalized by
// its actual norm. sign must be +1 or -1.
PureState2 ecs_state(cplx lambda, int sign, int dim = 0);

// Mean photon number of the ECS and the inverse problem: |lambda| whose ECS
// mean equals target. The minus-sign ECS mean is always > 1, so targets
// at or below 1 have no solution and throw NonConvergence.
double ecs_mean(double lambda_mag, int sign);
double ecs_match_mean(double target_mean, int sign);

}  // namespace noonsim
