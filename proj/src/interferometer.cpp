#include "noonsim/interferometer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "noonsim/kernels.hpp"

namespace noonsim {
namespace {

constexpr cplx kI{0.0, 1.0};

// Bessel functions J_0..J_kmax at x >= 0 by Miller's downward recurrence.
// Stable for the large orders the Chebyshev expansion needs; normalized
// with J_0 + 2 sum J_{2k} = 1.
std::vector<double> bessel_j_seq(double x, int kmax) {
  std::vector<double> out(kmax + 1, 0.0);
  if (x == 0.0) {
    out[0] = 1.0;
    return out;
  }
  const int start =
      kmax + 20 + static_cast<int>(2.0 * std::sqrt(static_cast<double>(
                                             std::max(kmax, 1))));
  double jp = 0.0;       // J_{k+1}
  double jc = 1e-300;    // J_k seed
  double norm_acc = 0.0;
  for (int k = start; k >= 1; --k) {
    double jm = (2.0 * k / x) * jc - jp;
    jp = jc;
    jc = jm;
    if (k - 1 <= kmax) out[k - 1] = jc;
    if (std::abs(jc) > 1e250) {
      const double scale = 1e-250;
      jc *= scale;
      jp *= scale;
      for (double& v : out) v *= scale;
    }
  }
  norm_acc = out[0];
  for (int k = 2; k <= kmax; k += 2) norm_acc += 2.0 * out[k];
  // Orders above kmax contribute at most the tail we deliberately cut;
  // the expansion cutoff already placed kmax deep into the decay regime.
  if (norm_acc == 0.0) throw NonConvergence("bessel_j_seq: normalization lost");
  for (double& v : out) v /= norm_acc;
  return out;
}

// Chebyshev expansion degree for exp(i z cos) style kernels: |z| plus a
// superlinear safety margin keeps the dropped Bessel tail below 1e-16.
int chebyshev_terms(double z) {
  const double az = std::abs(z);
  return static_cast<int>(
      std::ceil(az + 18.0 * std::cbrt(std::max(1.0, az)) + 12.0));
}

struct SectorWorkspace {
  std::vector<cplx> x, t_prev, t_cur, t_next, acc;
  std::vector<double> off;  // tridiagonal couplings / N
};

// Apply exp(theta A) on one total-photon sector, in place on x.
// A is the antisymmetric tridiagonal generator; conjugating by
// diag(i^k) turns it into i*S with S real symmetric tridiagonal whose
// spectrum is exactly {-N..N}, so exp(i theta S) has a Chebyshev series
// with Bessel coefficients a_k = (2 - delta_k0) i^k J_k(theta N).
void apply_sector(SectorWorkspace& w, int n_total, double theta) {
  const int len = n_total + 1;
  const auto& k = kernels::active();

  // gauge in: x[j] *= i^j
  for (int j = 0; j < len; ++j) {
    switch (j & 3) {
      case 1: w.x[j] *= kI; break;
      case 2: w.x[j] = -w.x[j]; break;
      case 3: w.x[j] *= -kI; break;
      default: break;
    }
  }

  const double z = theta * n_total;
  const double az = std::abs(z);
  const int kmax = chebyshev_terms(az);
  const auto bj = bessel_j_seq(az, kmax);
  // J_k(-z) = (-1)^k J_k(z)
  const double flip = (z < 0.0) ? -1.0 : 1.0;

  w.off.resize(len - 1);
  for (int j = 0; j + 1 < len; ++j) {
    w.off[j] = std::sqrt((j + 1.0) * (n_total - j)) / n_total;
  }

  w.t_prev.assign(w.x.begin(), w.x.begin() + len);   // T_0 = x
  w.t_cur.resize(len);
  w.t_next.resize(len);
  w.acc.assign(len, cplx{0.0, 0.0});
  k.tridiag(w.off.data(), w.t_prev.data(), w.t_cur.data(), len);  // T_1

  // a_0 T_0 + a_1 T_1
  k.caxpy(cplx{bj[0], 0.0}, w.t_prev.data(), w.acc.data(), len);
  {
    double sgn = flip;
    k.caxpy(cplx{0.0, 2.0 * sgn * bj[1]}, w.t_cur.data(), w.acc.data(), len);
  }
  for (int j = 2; j <= kmax; ++j) {
    // T_{j} = 2 S~ T_{j-1} - T_{j-2}
    k.tridiag(w.off.data(), w.t_cur.data(), w.t_next.data(), len);
    for (int i = 0; i < len; ++i) {
      w.t_next[i] = 2.0 * w.t_next[i] - w.t_prev[i];
    }
    std::swap(w.t_prev, w.t_cur);
    std::swap(w.t_cur, w.t_next);
    const double jk = bj[j] * ((j % 2 == 1) ? flip : 1.0);
    cplx coeff;
    switch (j & 3) {  // 2 * i^j * J_j
      case 0: coeff = cplx{2.0 * jk, 0.0}; break;
      case 1: coeff = cplx{0.0, 2.0 * jk}; break;
      case 2: coeff = cplx{-2.0 * jk, 0.0}; break;
      default: coeff = cplx{0.0, -2.0 * jk}; break;
    }
    k.caxpy(coeff, w.t_cur.data(), w.acc.data(), len);
  }

  // gauge out: x[j] = (-i)^j acc[j]
  for (int j = 0; j < len; ++j) {
    switch (j & 3) {
      case 1: w.x[j] = -kI * w.acc[j]; break;
      case 2: w.x[j] = -w.acc[j]; break;
      case 3: w.x[j] = kI * w.acc[j]; break;
      default: w.x[j] = w.acc[j]; break;
    }
  }
}

double lchoose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace

PureState2 beam_splitter(const PureState2& s, double tau, bool inverse) {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("beam_splitter: tau must lie in [0,1]");
  }
  if (tau == 1.0) return s;
  double theta = std::acos(std::sqrt(tau));
  if (inverse) theta = -theta;

  // Find the highest populated sector so the output grid can hold it fully.
  int max_n = -1;
  for (int n1 = s.dim - 1; n1 >= 0; --n1) {
    for (int n2 = s.dim - 1; n2 >= 0; --n2) {
      if (s.at(n1, n2) != cplx{0.0, 0.0}) {
        max_n = std::max(max_n, n1 + n2);
        break;
      }
    }
  }
  if (max_n < 0) return s;  // zero state

  PureState2 out;
  out.dim = std::max(s.dim, max_n + 1);
  out.amps.assign(static_cast<size_t>(out.dim) * out.dim, cplx{0.0, 0.0});
  for (int n1 = 0; n1 < s.dim; ++n1) {
    for (int n2 = 0; n2 < s.dim; ++n2) out.at(n1, n2) = s.at(n1, n2);
  }

  SectorWorkspace w;
  w.x.resize(max_n + 1);
  for (int n = 1; n <= max_n; ++n) {
    // gather anti-diagonal: x[k] = amp(k, n-k)
    bool populated = false;
    for (int k = 0; k <= n; ++k) {
      w.x[k] = out.at(k, n - k);
      populated = populated || (w.x[k] != cplx{0.0, 0.0});
    }
    if (!populated) continue;
    apply_sector(w, n, theta);
    for (int k = 0; k <= n; ++k) out.at(k, n - k) = w.x[k];
  }
  return out;
}

EdgeAmplitudes beam_splitter_edges_half(const PureState1& a,
                                        const PureState1& b) {
  const int da = a.dim(), db = b.dim();
  const int dn = da + db - 1;
  EdgeAmplitudes e;
  e.n0.assign(dn, cplx{0.0, 0.0});
  e.zn.assign(dn, cplx{0.0, 0.0});
  const double ln2 = std::log(2.0);
  for (int n_tot = 0; n_tot < dn; ++n_tot) {
    cplx top{0.0, 0.0}, bottom{0.0, 0.0};
    const int jlo = std::max(0, n_tot - db + 1);
    const int jhi = std::min(n_tot, da - 1);
    for (int j = jlo; j <= jhi; ++j) {
      const double c =
          std::exp(0.5 * (lchoose(n_tot, j) - n_tot * ln2));
      const cplx term = c * a.amps[j] * b.amps[n_tot - j];
      top += term;
      bottom += (j % 2 == 0) ? term : -term;
    }
    e.n0[n_tot] = top;
    e.zn[n_tot] = bottom;
  }
  return e;
}

double herald_prob(cplx zeta, double tau, int m) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("herald: tau must lie in (0,1]");
  }
  if (m < 0) throw std::invalid_argument("herald: m must be >= 0");
  if (tau == 1.0) return (m == 0) ? 1.0 : 0.0;
  const PureState1 z = make_squeezed_vacuum(zeta);
  double acc = 0.0;
  const double lt = std::log(tau);
  const double l1t = std::log1p(-tau);
  for (int k = 0; k + m < z.dim(); ++k) {
    const double lw = lchoose(k + m, m) + k * lt + m * l1t;
    acc += std::exp(lw) * std::norm(z.amps[k + m]);
  }
  return acc;
}

HeraldOutcome1 subtract_photons(cplx zeta, double tau, int m) {
  if (!(tau > 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("subtract_photons: tau must lie in (0,1]");
  }
  if (m < 0) throw std::invalid_argument("subtract_photons: m must be >= 0");
  const PureState1 z = make_squeezed_vacuum(zeta);
  if (m == 0 && tau == 1.0) return {z, 1.0};
  if (tau == 1.0) {
    throw ZeroProbabilityHerald(
        "subtract_photons: tau=1 reflects nothing, m>=1 never fires");
  }
  const int du = std::max(1, z.dim() - m);
  PureState1 u;
  u.amps.assign(du, cplx{0.0, 0.0});
  const double lt = std::log(tau);
  const double l1t = std::log1p(-tau);
  const double sign = (m % 2 == 0) ? 1.0 : -1.0;
  double nsum = 0.0;
  for (int k = 0; k + m < z.dim(); ++k) {
    const double lw = lchoose(k + m, m) + k * lt + m * l1t;
    u.amps[k] = sign * std::exp(0.5 * lw) * z.amps[k + m];
    nsum += std::norm(u.amps[k]);
  }
  if (nsum <= 0.0) {
    throw ZeroProbabilityHerald(
        "subtract_photons: no amplitude reaches the detector (zeta too small "
        "for m=" +
        std::to_string(m) + ")");
  }
  const double inv = 1.0 / std::sqrt(nsum);
  for (auto& a : u.amps) a *= inv;
  return {trim(u), nsum};
}

PureState2 psi_state(cplx zeta, cplx lambda, int dim) {
  const PureState1 sq = make_squeezed_vacuum(zeta, 0);
  const PureState1 coh = make_coherent(lambda, 0);
  PureState2 out = beam_splitter(tensor(sq, coh), 0.5);
  if (dim > 0) return truncate_to(out, dim);
  return trim(out, 1e-10);
}

HeraldOutcome2 psi_m_state(const ModeParams& p, int dim) {
  p.validate();
  const HeraldOutcome1 sub = subtract_photons(p.zeta, p.tau, p.m);
  const PureState1 coh = make_coherent(p.lambda, 0);
  PureState2 out = beam_splitter(tensor(sub.state, coh), 0.5);
  if (dim > 0) {
    return {truncate_to(out, dim), sub.herald_prob};
  }
  return {trim(out, 1e-10), sub.herald_prob};
}

PureState2 ecs_state(cplx lambda, int sign, int dim) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("ecs_state: sign must be +1 or -1");
  }
  if (sign == -1 && lambda == cplx{0.0, 0.0}) {
    throw std::invalid_argument("ecs_state: minus-sign ECS undefined at 0");
  }
  const PureState1 coh = make_coherent(lambda, dim);
  const PureState1 vac = make_vacuum(coh.dim());
  PureState2 a = tensor(coh, vac);
  const PureState2 b = tensor(vac, coh);
  for (size_t i = 0; i < a.amps.size(); ++i) {
    a.amps[i] += static_cast<double>(sign) * b.amps[i];
  }
  return normalize(a).first;
}

double ecs_mean(double lambda_mag, int sign) {
  const double x = lambda_mag * lambda_mag;
  return x / (1.0 + sign * std::exp(-x));
}

double ecs_match_mean(double target_mean, int sign) {
  if (sign != 1 && sign != -1) {
    throw std::invalid_argument("ecs_match_mean: sign must be +1 or -1");
  }
  if (target_mean <= 0.0) {
    throw NonConvergence("ecs_match_mean: target mean must be positive");
  }
  if (sign == -1 && target_mean <= 1.0) {
    throw NonConvergence(
        "ecs_match_mean: minus-sign ECS mean exceeds 1 for every amplitude; "
        "no bracket for target " +
        std::to_string(target_mean));
  }
  double lo = 0.0, hi = 1.0;
  while (ecs_mean(hi, sign) < target_mean) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) {
      throw NonConvergence("ecs_match_mean: failed to bracket target " +
                           std::to_string(target_mean));
    }
  }
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (ecs_mean(mid, sign) < target_mean) {
      lo = mid;
    } else {
      hi = mid;
    }
    if (hi - lo < 1e-14 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace noonsim
