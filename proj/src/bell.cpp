#include "noonsim/bell.hpp"

#include <cmath>
#include <stdexcept>

#include "noonsim/errors.hpp"
#include "noonsim/husimi.hpp"
#include "noonsim/interferometer.hpp"
#include "noonsim/kernels.hpp"
#include "noonsim/loss.hpp"
#include "noonsim/optim.hpp"
#include "noonsim/rng.hpp"

namespace noonsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Evaluates J1 for one ensemble at many settings. Workspaces are sized once
// so the optimizer's inner loop never allocates.
class J1Evaluator {
 public:
  J1Evaluator(const StateEnsemble& e, Convention c) : e_(e), conv_(c) {
    int dmax = 1;
    for (const auto& b : e.branches) dmax = std::max(dmax, b.state.dim);
    dmax_ = dmax;
    rows_.assign(size_t(4) * dmax_, cplx(0.0, 0.0));
    rvec_.assign(size_t(4) * dmax_, cplx(0.0, 0.0));
  }

  double eval(const BellSettings& st) {
    const cplx set[4] = {st.alpha, st.beta, st.gamma, st.delta};
    const auto& k = kernels::active();
    double singles = 0.0, pairs = 0.0;
    for (const auto& b : e_.branches) {
      const int d = b.state.dim;
      cplx* c[4];
      cplx* r[4];
      for (int s = 0; s < 4; ++s) {
        c[s] = rows_.data() + size_t(s) * dmax_;
        r[s] = rvec_.data() + size_t(s) * dmax_;
        coherent_row_into(set[s], d, c[s]);
        std::fill(r[s], r[s] + d, cplx(0.0, 0.0));
      }
      double q2[4] = {0.0, 0.0, 0.0, 0.0};
      for (int n1 = 0; n1 < d; ++n1) {
        const cplx* row = &b.state.amps[size_t(n1) * d];
        for (int s = 0; s < 4; ++s) {
          k.caxpy(std::conj(c[s][n1]), row, r[s], size_t(d));
          if (conv_ == Convention::symmetrized)
            q2[s] += std::norm(k.cdotc(c[s], row, size_t(d)));
        }
      }
      for (int s = 0; s < 4; ++s) {
        const double q1 = k.norm_sq(r[s], size_t(d));
        singles += b.weight * (conv_ == Convention::mode1
                                   ? q1
                                   : 0.5 * (q1 + q2[s]));
      }
      for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
          pairs += b.weight * std::norm(k.cdotc(c[j], r[i], size_t(d)));
    }
    return singles - pairs;
  }

 private:
  const StateEnsemble& e_;
  Convention conv_;
  int dmax_ = 1;
  std::vector<cplx> rows_, rvec_;
};

StateEnsemble wrap_pure(const PureState2& psi) {
  StateEnsemble e;
  e.branches.push_back({1.0, psi});
  return e;
}

BellSettings settings_from(const std::vector<double>& x) {
  return {cplx(x[0], x[1]), cplx(x[2], x[3]), cplx(x[4], x[5]),
          cplx(x[6], x[7])};
}

// The k-th start of the multi-start schedule. Depends only on k, the scale
// and the warm setting, never on n_starts, so prefixes are stable.
std::vector<double> start_point(int k, double scale,
                                const std::optional<BellSettings>& warm,
                                std::uint64_t seed) {
  std::vector<double> x(8, 0.0);
  int j = k;
  if (warm) {
    if (k == 0) {
      const BellSettings& w = *warm;
      x = {w.alpha.real(), w.alpha.imag(), w.beta.real(),  w.beta.imag(),
           w.gamma.real(), w.gamma.imag(), w.delta.real(), w.delta.imag()};
      j = -1;
    } else {
      j = k - 1;
    }
  }
  if (j > 0) {
    // rings of equal-setting starts: 8 phases at radius scale/sqrt(2), then
    // 8 more at scale*sqrt(2), then looser staggered rings beyond
    double radius, phase0;
    int q = j - 1;
    if (q < 8) {
      radius = scale / std::sqrt(2.0);
      phase0 = 2.0 * kPi * q / 8.0;
    } else if (q < 16) {
      radius = scale * std::sqrt(2.0);
      phase0 = 2.0 * kPi * (q - 8) / 8.0 + kPi / 8.0;
    } else {
      radius = scale * (0.4 + 0.3 * ((q - 16) % 7));
      phase0 = 2.39996322972865332 * q;  // golden-angle stepping
    }
    for (int s = 0; s < 4; ++s) {
      const double ph = phase0 + (q >= 16 ? s * kPi / 2.0 : 0.0);
      x[2 * s] = radius * std::cos(ph);
      x[2 * s + 1] = radius * std::sin(ph);
    }
  }
  SplitMix64 g(child_seed(seed, std::uint64_t(k)));
  for (double& xi : x) xi += 0.05 * g.gaussian();
  return x;
}

BellResult maximize_impl(const StateEnsemble& e, const MaximizeOptions& o) {
  if (o.n_starts < 1)
    throw std::invalid_argument("maximize_j1 needs at least one start");
  J1Evaluator ev(e, o.convention);

  double scale = o.scale_hint;
  if (!(scale > 0.0)) {
    scale = std::sqrt(std::max(ensemble_mean_photon(e), 0.0) / 2.0);
    scale = std::max(scale, 0.25);
  }

  auto obj = [&](const std::vector<double>& x) {
    return -ev.eval(settings_from(x));
  };

  BellResult res;
  res.starts_used = o.n_starts;
  double best = -1e300;
  std::vector<double> best_x;
  for (int k = 0; k < o.n_starts; ++k) {
    const auto r = optim::nelder_mead(obj, start_point(k, scale, o.warm, o.seed));
    res.start_values.push_back(-r.fval);
    res.converged = res.converged || r.converged;
    if (-r.fval > best) {
      best = -r.fval;
      best_x = r.x;
    }
  }
  if (!res.converged)
    throw NonConvergence("maximize_j1: no simplex start converged");
  res.settings = settings_from(best_x);
  res.j1 = ev.eval(res.settings);
  return res;
}

}  // namespace

double j1_value(const StateEnsemble& e, const BellSettings& s, Convention c) {
  return J1Evaluator(e, c).eval(s);
}

double j1_value(const PureState2& psi, const BellSettings& s, Convention c) {
  return j1_value(wrap_pure(psi), s, c);
}

BellResult maximize_j1(const StateEnsemble& e, const MaximizeOptions& o) {
  return maximize_impl(e, o);
}

BellResult maximize_j1(const PureState2& psi, const MaximizeOptions& o) {
  return maximize_impl(wrap_pure(psi), o);
}

std::vector<SweepRecord> sweep_zeta_lambda(const std::vector<int>& m_list,
                                           const std::vector<double>& zeta_grid,
                                           const std::vector<double>& lambda_grid,
                                           double tau,
                                           const MaximizeOptions& o) {
  std::vector<SweepRecord> out;
  for (int m : m_list) {
    for (double z : zeta_grid) {
      MaximizeOptions cell = o;
      cell.warm.reset();
      for (double lm : lambda_grid) {
        SweepRecord rec;
        rec.m = m;
        rec.zeta = z;
        rec.lambda_mag = lm;
        try {
          ModeParams p{cplx(z, 0.0), cplx(0.0, lm), tau, m};
          const auto h = psi_m_state(p);
          const auto r = maximize_j1(h.state, cell);
          rec.j1 = r.j1;
          rec.converged = r.converged;
          rec.settings = r.settings;
          cell.warm = r.settings;  // chain along the lambda axis
        } catch (const std::exception& ex) {
          rec.error = ex.what();
          cell.warm.reset();
        }
        out.push_back(std::move(rec));
      }
    }
  }
  return out;
}

std::vector<EtaRecord> eta_scan(const ModeParams& p,
                                const std::vector<double>& eta_grid,
                                const MaximizeOptions& o) {
  std::vector<EtaRecord> out;
  MaximizeOptions cell = o;
  for (double eta : eta_grid) {
    auto [ens, n_eta] = herald_with_inefficiency(p, eta);
    const auto r = maximize_j1(ens, cell);
    cell.warm = r.settings;
    out.push_back({eta, r.j1, n_eta});
  }
  return out;
}

std::vector<TauPrimeRecord> tau_prime_scan(const ModeParams& p,
                                           const std::vector<double>& grid,
                                           bool with_ecs,
                                           const MaximizeOptions& o) {
  std::vector<TauPrimeRecord> out;
  MaximizeOptions cell = o;
  MaximizeOptions ecs_cell = o;
  const int ecs_sign = (p.m % 2 == 0) ? +1 : -1;
  for (double tp : grid) {
    TauPrimeRecord rec;
    rec.tau_prime = tp;
    const StateEnsemble ens = transmission_loss_commuted(p, tp);
    const auto r = maximize_j1(ens, cell);
    cell.warm = r.settings;
    rec.j1 = r.j1;
    rec.mean_photon = ensemble_mean_photon(ens);
    if (with_ecs) {
      // Lossless entangled coherent state of the same mean photon number
      // and the parity the heralded state carries. The odd-sign ECS mean
      // never drops below 1, so deep-loss rows can have no counterpart.
      try {
        const double mag = ecs_match_mean(rec.mean_photon, ecs_sign);
        const PureState2 ecs = ecs_state(cplx(0.0, mag), ecs_sign);
        const auto re = maximize_j1(ecs, ecs_cell);
        ecs_cell.warm = re.settings;
        rec.has_ecs = true;
        rec.ecs_lambda_mag = mag;
        rec.ecs_j1 = re.j1;
      } catch (const NonConvergence&) {
        rec.has_ecs = false;
      }
    }
    out.push_back(rec);
  }
  return out;
}

std::vector<PhaseRecord> phase_scan(double zeta, double lambda_mag, double tau,
                                    int m, const std::vector<double>& offsets,
                                    bool reoptimize,
                                    const MaximizeOptions& o) {
  for (double d : offsets) {
    if (!(d >= -kPi / 2.0 && d <= kPi / 2.0))
      throw std::invalid_argument(
          "phase offsets must lie in [-pi/2, pi/2]");
  }
  auto state_at = [&](double offset) {
    ModeParams p{cplx(zeta, 0.0),
                 std::polar(lambda_mag, kPi / 2.0 + offset), tau, m};
    return psi_m_state(p).state;
  };

  std::vector<PhaseRecord> out;
  if (reoptimize) {
    MaximizeOptions cell = o;
    for (double d : offsets) {
      const auto r = maximize_j1(state_at(d), cell);
      cell.warm = r.settings;
      out.push_back({d, r.j1});
    }
    return out;
  }
  // Frozen-settings protocol: the experimenter aligns the apparatus for the
  // nominal phase, then the source drifts.
  const BellSettings frozen = maximize_j1(state_at(0.0), o).settings;
  for (double d : offsets)
    out.push_back({d, j1_value(state_at(d), frozen, o.convention)});
  return out;
}

}  // namespace noonsim
