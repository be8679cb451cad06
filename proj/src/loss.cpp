#include "noonsim/loss.hpp"

#include <cmath>
#include <stdexcept>

#include "noonsim/errors.hpp"
#include "noonsim/interferometer.hpp"
#include "noonsim/kernels.hpp"
#include "noonsim/quadrature.hpp"

namespace noonsim {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kPruneTol = 1e-12;

void check_tau_prime(double tau_prime) {
  if (!(tau_prime >= 0.0 && tau_prime <= 1.0))
    throw std::invalid_argument("tau_prime must lie in [0,1]");
}

// sqrt(C(n+k,k) tau^n (1-tau)^k): amplitude scaling of |n+k> -> |n> under
// a loss channel that removed k photons. Log domain; the binomial is huge
// long before the product is.
double loss_coef(int n, int k, double ltau, double l1mtau) {
  const double lw = std::lgamma(double(n + k) + 1.0) -
                    std::lgamma(double(k) + 1.0) -
                    std::lgamma(double(n) + 1.0) + n * ltau + k * l1mtau;
  return std::exp(0.5 * lw);
}

StateEnsemble single_branch(PureState2 s) {
  StateEnsemble e;
  e.branches.push_back({1.0, std::move(s)});
  return e;
}

PureState2 two_mode_vacuum() {
  PureState2 v;
  v.dim = 1;
  v.amps = {cplx(1.0, 0.0)};
  return v;
}

// Loss branches of a single-mode state: (weight, normalized state after
// losing exactly k photons), pruned below kPruneTol.
struct LossBranch1 {
  double weight;
  PureState1 state;
};
std::vector<LossBranch1> loss_branches_1(const PureState1& s,
                                         double tau_prime, double* pruned) {
  const double ltau = std::log(tau_prime);
  const double l1mtau = std::log1p(-tau_prime);
  const int d = s.dim();
  std::vector<LossBranch1> out;
  for (int k = 0; k < d; ++k) {
    PureState1 u;
    u.amps.assign(size_t(d - k), cplx(0.0, 0.0));
    for (int n = 0; n + k < d; ++n)
      u.amps[n] = loss_coef(n, k, ltau, l1mtau) * s.amps[n + k];
    const double w = u.norm_sq();
    if (w < kPruneTol) {
      *pruned += w;
      continue;
    }
    const double inv = 1.0 / std::sqrt(w);
    for (auto& a : u.amps) a *= inv;
    out.push_back({w, trim(u)});
  }
  return out;
}

}  // namespace

StateEnsemble transmission_loss(const PureState2& s, double tau_prime) {
  check_tau_prime(tau_prime);
  if (tau_prime == 1.0) return single_branch(s);
  if (tau_prime == 0.0) return single_branch(two_mode_vacuum());

  const double ltau = std::log(tau_prime);
  const double l1mtau = std::log1p(-tau_prime);
  const int d = s.dim;
  std::vector<double> coef(size_t(d) * d);
  for (int k = 0; k < d; ++k)
    for (int n = 0; n + k < d; ++n)
      coef[size_t(k) * d + n] = loss_coef(n, k, ltau, l1mtau);

  StateEnsemble e;
  for (int k1 = 0; k1 < d; ++k1) {
    for (int k2 = 0; k2 < d; ++k2) {
      const int d1 = d - k1, d2 = d - k2;
      PureState2 u;
      u.dim = std::max(d1, d2);
      u.amps.assign(size_t(u.dim) * u.dim, cplx(0.0, 0.0));
      for (int n1 = 0; n1 < d1; ++n1) {
        const double c1 = coef[size_t(k1) * d + n1];
        for (int n2 = 0; n2 < d2; ++n2) {
          u.at(n1, n2) =
              c1 * coef[size_t(k2) * d + n2] * s.at(n1 + k1, n2 + k2);
        }
      }
      const double w = u.norm_sq();
      if (w < kPruneTol) {
        e.pruned_weight += w;
        continue;
      }
      const double inv = 1.0 / std::sqrt(w);
      for (auto& a : u.amps) a *= inv;
      e.branches.push_back({w, trim(u)});
    }
  }
  return e;
}

StateEnsemble transmission_loss_commuted(const ModeParams& p,
                                         double tau_prime) {
  p.validate();
  check_tau_prime(tau_prime);
  if (tau_prime == 0.0) return single_branch(two_mode_vacuum());

  const PureState1 zm = subtract_photons(p.zeta, p.tau, p.m).state;
  const PureState1 coh =
      make_coherent(std::sqrt(tau_prime) * p.lambda);
  if (tau_prime == 1.0)
    return single_branch(trim(beam_splitter(tensor(zm, coh), 0.5), 1e-10));

  StateEnsemble e;
  for (auto& br : loss_branches_1(zm, tau_prime, &e.pruned_weight)) {
    PureState2 out = trim(beam_splitter(tensor(br.state, coh), 0.5), 1e-10);
    e.branches.push_back({br.weight, std::move(out)});
  }
  return e;
}

std::pair<StateEnsemble, double> herald_with_inefficiency(const ModeParams& p,
                                                          double eta,
                                                          int mprime_cutoff) {
  p.validate();
  if (!(eta >= 0.0 && eta <= 1.0))
    throw std::invalid_argument("eta must lie in [0,1]");
  if (eta == 0.0 && p.m >= 1)
    throw ZeroProbabilityHerald(
        "detector efficiency 0 cannot herald m >= 1 clicks");

  if (eta == 1.0) {
    auto h = psi_m_state(p);
    StateEnsemble e;
    e.branches.push_back({1.0, std::move(h.state)});
    return {std::move(e), h.herald_prob};
  }

  // Binomial mixing weights over the true subtraction count m'. The herald
  // probabilities N_{m'} are cheap closed forms, so the cutoff is settled
  // before any state is built.
  // m log(eta) with the 0 * log(0) = 0 convention, so a dead detector can
  // still "herald" zero clicks (the mixture is then the full prior over m')
  const double lg_eta = p.m == 0 ? 0.0 : p.m * std::log(eta);
  const double l1me = std::log1p(-eta);
  auto raw_weight = [&](int mp) {
    const double lb = std::lgamma(double(mp) + 1.0) -
                      std::lgamma(double(p.m) + 1.0) -
                      std::lgamma(double(mp - p.m) + 1.0);
    return std::exp(lb + lg_eta + (mp - p.m) * l1me) *
           herald_prob(p.zeta, p.tau, mp);
  };

  std::vector<double> w;
  double n_eta = 0.0;
  if (mprime_cutoff == 0) {
    int small_streak = 0;
    for (int mp = p.m; mp <= p.m + 400; ++mp) {
      const double wi = raw_weight(mp);
      w.push_back(wi);
      n_eta += wi;
      if (mp >= p.m + 5) {
        small_streak = (wi <= 1e-10 * n_eta) ? small_streak + 1 : 0;
        if (small_streak >= 2) break;
      }
    }
    if (small_streak < 2)
      throw NonConvergence("inefficient-herald cutoff did not stabilize");
  } else {
    if (mprime_cutoff < p.m)
      throw std::invalid_argument("mprime_cutoff below click count m");
    for (int mp = p.m; mp <= mprime_cutoff; ++mp) {
      w.push_back(raw_weight(mp));
      n_eta += w.back();
    }
  }
  if (!(n_eta > 0.0))
    throw ZeroProbabilityHerald("herald probability vanished for all m'");
  if (mprime_cutoff != 0 && raw_weight(mprime_cutoff + 1) >= 1e-10 * n_eta)
    throw std::invalid_argument(
        "mprime_cutoff too small: the next branch still matters");

  StateEnsemble e;
  ModeParams q = p;
  for (size_t i = 0; i < w.size(); ++i) {
    const double wn = w[i] / n_eta;
    if (wn < kPruneTol) {
      e.pruned_weight += wn;
      continue;
    }
    q.m = p.m + int(i);
    e.branches.push_back({wn, psi_m_state(q).state});
  }
  return {std::move(e), n_eta};
}

JointDistribution lossy_distribution(const ModeParams& p, double tau_prime) {
  const StateEnsemble e = transmission_loss_commuted(p, tau_prime);
  JointDistribution jd;
  for (const auto& b : e.branches) jd.dim = std::max(jd.dim, b.state.dim);
  jd.p.assign(size_t(jd.dim) * jd.dim, 0.0);
  for (const auto& b : e.branches) {
    const int d = b.state.dim;
    for (int n1 = 0; n1 < d; ++n1)
      for (int n2 = 0; n2 < d; ++n2)
        jd.p[size_t(n1) * jd.dim + n2] +=
            b.weight * std::norm(b.state.at(n1, n2));
  }
  return jd;
}

double ensemble_mean_photon(const StateEnsemble& e) {
  double acc = 0.0, wsum = 0.0;
  for (const auto& b : e.branches) {
    acc += b.weight * mean_photon(b.state);
    wsum += b.weight;
  }
  if (!(wsum > 0.0)) throw std::invalid_argument("empty ensemble");
  return acc / wsum;
}

double ensemble_off_edge_mass(const StateEnsemble& e, int k) {
  double acc = 0.0, wsum = 0.0;
  for (const auto& b : e.branches) {
    acc += b.weight * off_edge_mass(b.state, k);
    wsum += b.weight;
  }
  if (!(wsum > 0.0)) throw std::invalid_argument("empty ensemble");
  return acc / wsum;
}

double q_lossy_quadrature(const PureState2& s, double tau_prime,
                          const PhasePoint& p, int gh_nodes) {
  check_tau_prime(tau_prime);
  if (tau_prime == 0.0)
    throw std::invalid_argument(
        "q_lossy_quadrature: tau_prime = 0 has no integral form");
  if (tau_prime == 1.0) return q_two_mode(s, p);

  const GaussHermite gh = gauss_hermite(gh_nodes);
  const double g = std::sqrt(1.0 - tau_prime);
  const double h = std::sqrt(tau_prime);
  double total = 0.0;
  for (int i1 = 0; i1 < gh_nodes; ++i1) {
    for (int j1 = 0; j1 < gh_nodes; ++j1) {
      const cplx u1(gh.nodes[i1], gh.nodes[j1]);
      const double w1 = gh.weights[i1] * gh.weights[j1];
      const cplx b1 = (p.a1 - g * u1) / h;
      for (int i2 = 0; i2 < gh_nodes; ++i2) {
        for (int j2 = 0; j2 < gh_nodes; ++j2) {
          const cplx u2(gh.nodes[i2], gh.nodes[j2]);
          const double w2 = gh.weights[i2] * gh.weights[j2];
          const PhasePoint q{b1, (p.a2 - g * u2) / h};
          total += w1 * w2 * q_two_mode(s, q);
        }
      }
    }
  }
  return total / (kPi * kPi * tau_prime * tau_prime);
}

}  // namespace noonsim
