#include "noonsim/noon.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "noonsim/errors.hpp"
#include "noonsim/optim.hpp"

namespace noonsim {

namespace {

// i^k without calling pow on the unit circle.
cplx ipow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

PhotonStats stats_from_probs(std::vector<double> unnormalized) {
  double sum = 0.0;
  for (double p : unnormalized) sum += p;
  if (!(sum > 0.0))
    throw std::invalid_argument(
        "edge distribution is identically zero (degenerate)");
  PhotonStats st;
  st.P = std::move(unnormalized);
  double mean = 0.0, second = 0.0;
  for (size_t n = 0; n < st.P.size(); ++n) {
    st.P[n] /= sum;
    mean += double(n) * st.P[n];
    second += double(n) * double(n) * st.P[n];
  }
  st.mean = mean;
  st.stddev = std::sqrt(std::max(0.0, second - mean * mean));
  return st;
}

PhotonStats edge_marginal(const PureState2& s) {
  std::vector<double> p(s.dim);
  for (int n = 0; n < s.dim; ++n) p[n] = std::norm(s.at(n, 0));
  return stats_from_probs(std::move(p));
}

PureState2 noon_superposition(const PhotonStats& stats, int m, int dim) {
  const int support = int(stats.P.size());
  if (dim == 0) dim = support;
  if (dim < support) {
    double dropped = 0.0;
    for (int n = dim; n < support; ++n) dropped += stats.P[n];
    if (dropped > 0.0)
      throw TruncationError("noon_superposition: dim cuts the distribution",
                            dropped);
  }
  PureState2 out;
  out.dim = dim;
  out.amps.assign(size_t(dim) * size_t(dim), cplx(0.0, 0.0));
  const double relsign = (m % 2 == 0) ? 1.0 : -1.0;
  out.at(0, 0) = ipow(m) * std::sqrt(stats.P[0]);
  for (int n = 1; n < std::min(dim, support); ++n) {
    const cplx amp = ipow(n + m) * std::sqrt(0.5 * stats.P[n]);
    out.at(n, 0) = amp;
    out.at(0, n) = relsign * amp;
  }
  return out;
}

double fidelity(const PureState2& a, const PureState2& b) {
  return std::abs(inner(a, b));
}

namespace {

// Overlap of the beam splitter output with the ideal superposition built
// from its own edge marginal. Only edge amplitudes enter, so the state
// grid is never formed.
double edge_target_fidelity(const PureState1& zm, int m, cplx lambda) {
  const PureState1 coh = make_coherent(lambda);
  const EdgeAmplitudes e = beam_splitter_edges_half(zm, coh);
  const int d = int(e.n0.size());
  double psum = 0.0;
  for (int n = 0; n < d; ++n) psum += std::norm(e.n0[n]);
  if (!(psum > 0.0)) return 0.0;
  const double relsign = (m % 2 == 0) ? 1.0 : -1.0;
  // <target|psi>: the target amplitude at (N,0) is i^{N+m} sqrt(P_N/2)
  // (without the 1/2 at N=0), P_N = |n0[N]|^2 / psum.
  cplx acc = std::conj(ipow(m)) * std::abs(e.n0[0]) * e.n0[0];
  for (int n = 1; n < d; ++n) {
    const double t = std::sqrt(0.5) * std::abs(e.n0[n]);
    acc += std::conj(ipow(n + m)) * t * (e.n0[n] + relsign * e.zn[n]);
  }
  return std::abs(acc) / std::sqrt(psum);
}

}  // namespace

double noon_fidelity(cplx zeta, cplx lambda, double tau, int m) {
  const PureState1 zm = subtract_photons(zeta, tau, m).state;
  return edge_target_fidelity(zm, m, lambda);
}

LambdaOpt optimize_lambda(cplx zeta, double tau, int m, bool full_complex) {
  if (zeta == cplx(0.0, 0.0))
    throw std::invalid_argument(
        "optimize_lambda: zeta = 0 makes the fidelity objective flat");
  const PureState1 zm = subtract_photons(zeta, tau, m).state;

  auto f_of_mag = [&](double y) { return edge_target_fidelity(zm, m, cplx(0.0, y)); };

  // Coarse scan of the imaginary-lambda ray, then golden refinement of the
  // best few local peaks. The objective is smooth but can have more than
  // one hump, hence the multi-start.
  const double lo = 0.1, hi = 12.0;
  const int ncoarse = 60;
  std::vector<double> ys(ncoarse), fs(ncoarse);
  for (int k = 0; k < ncoarse; ++k) {
    ys[k] = lo + (hi - lo) * double(k) / double(ncoarse - 1);
    fs[k] = f_of_mag(ys[k]);
  }
  std::vector<int> peaks;
  for (int k = 0; k < ncoarse; ++k) {
    const bool up = (k == 0) || fs[k] >= fs[k - 1];
    const bool down = (k == ncoarse - 1) || fs[k] >= fs[k + 1];
    if (up && down) peaks.push_back(k);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](int a, int b) { return fs[a] > fs[b]; });
  if (peaks.size() > 2) peaks.resize(2);

  double best_y = ys[0], best_f = -1.0;
  for (int k : peaks) {
    const double a = ys[std::max(0, k - 1)];
    const double b = ys[std::min(ncoarse - 1, k + 1)];
    const double y =
        optim::golden_section([&](double t) { return -f_of_mag(t); }, a, b, 1e-7);
    const double fv = f_of_mag(y);
    if (fv > best_f) {
      best_f = fv;
      best_y = y;
    }
  }

  LambdaOpt out;
  out.lambda_opt = cplx(0.0, best_y);
  out.f_max = best_f;

  if (full_complex) {
    auto obj = [&](const std::vector<double>& x) {
      return -edge_target_fidelity(zm, m, cplx(x[0], x[1]));
    };
    const auto r = optim::nelder_mead(obj, {0.0, best_y});
    if (-r.fval > out.f_max) {
      out.lambda_opt = cplx(r.x[0], r.x[1]);
      out.f_max = -r.fval;
    }
  }
  return out;
}

CatComparison cat_comparison(cplx zeta, double tau, int m) {
  CatComparison out;
  out.f_noon = optimize_lambda(zeta, tau, m).f_max;

  const PureState1 zm = subtract_photons(zeta, tau, m).state;
  auto cat_overlap = [&](cplx mu, int sign) {
    const double norm_sq = 2.0 * (1.0 + sign * std::exp(-2.0 * std::norm(mu)));
    if (norm_sq < 1e-200) return 0.0;
    const cplx ov = inner(make_coherent(mu), zm) +
                    double(sign) * inner(make_coherent(-mu), zm);
    return std::abs(ov) / std::sqrt(norm_sq);
  };

  const cplx starts[] = {{1.5, 0.0}, {2.5, 0.0}, {3.5, 0.0},
                         {0.0, 1.5}, {0.0, 2.5}, {1.5, 1.5}};
  for (int sign : {+1, -1}) {
    auto obj = [&](const std::vector<double>& x) {
      return -cat_overlap(cplx(x[0], x[1]), sign);
    };
    for (const cplx& s0 : starts) {
      const auto r = optim::nelder_mead(obj, {s0.real(), s0.imag()});
      out.f_cat = std::max(out.f_cat, -r.fval);
    }
  }
  return out;
}

}  // namespace noonsim
