#include "noonsim/husimi.hpp"

#include <cmath>
#include <stdexcept>

#include "noonsim/errors.hpp"
#include "noonsim/interferometer.hpp"
#include "noonsim/kernels.hpp"
#include "noonsim/quadrature.hpp"

namespace noonsim {

namespace {

constexpr double kPi = 3.14159265358979323846;

double coherent_tail(cplx alpha, const std::vector<cplx>& row) {
  double kept = kernels::active().norm_sq(row.data(), row.size());
  (void)alpha;
  return std::max(0.0, 1.0 - kept);
}

// <a1,a2|s> together with the truncation-blindness bound on that amplitude.
cplx overlap_two_mode(const PureState2& s, const PhasePoint& p,
                      double* amp_err) {
  const int d = s.dim;
  const auto c1 = coherent_row(p.a1, d);
  const auto c2 = coherent_row(p.a2, d);
  const auto& k = kernels::active();
  std::vector<cplx> r(d, cplx(0.0, 0.0));
  for (int n1 = 0; n1 < d; ++n1) {
    k.caxpy(std::conj(c1[n1]), &s.amps[size_t(n1) * d], r.data(), d);
  }
  if (amp_err) {
    *amp_err = std::sqrt(coherent_tail(p.a1, c1)) +
               std::sqrt(coherent_tail(p.a2, c2));
  }
  return k.cdotc(c2.data(), r.data(), size_t(d));
}

}  // namespace

void coherent_row_into(cplx alpha, int dim, cplx* out) {
  if (dim == 0) return;
  const double a2 = std::norm(alpha);
  if (a2 <= 1400.0) {
    out[0] = std::exp(-0.5 * a2);
    for (int n = 1; n < dim; ++n)
      out[n] = out[n - 1] * alpha / std::sqrt(double(n));
    return;
  }
  // exp(-|alpha|^2/2) underflows, but entries near n = |alpha|^2 are still
  // of order one; build each from its logarithm instead of recurring up
  // from an underflowed out[0].
  const double la = std::log(std::abs(alpha));
  const double th = std::arg(alpha);
  for (int n = 0; n < dim; ++n) {
    const double lm = -0.5 * a2 + n * la - 0.5 * std::lgamma(double(n) + 1.0);
    out[n] = (lm < -745.0) ? cplx(0.0, 0.0)
                           : std::polar(std::exp(lm), n * th);
  }
}

std::vector<cplx> coherent_row(cplx alpha, int dim) {
  std::vector<cplx> c(dim, cplx(0.0, 0.0));
  coherent_row_into(alpha, dim, c.data());
  return c;
}

double q_two_mode(const PureState2& s, const PhasePoint& p,
                  double* err_bound) {
  double amp_err = 0.0;
  const cplx ov = overlap_two_mode(s, p, err_bound ? &amp_err : nullptr);
  if (err_bound) {
    *err_bound =
        (2.0 * std::abs(ov) * amp_err + amp_err * amp_err) / (kPi * kPi);
  }
  return std::norm(ov) / (kPi * kPi);
}

double q_two_mode(const StateEnsemble& e, const PhasePoint& p,
                  double* err_bound) {
  double q = 0.0, err = 0.0;
  for (const auto& b : e.branches) {
    double be = 0.0;
    q += b.weight * q_two_mode(b.state, p, err_bound ? &be : nullptr);
    err += b.weight * be;
  }
  if (err_bound) *err_bound = err + e.pruned_weight / (kPi * kPi);
  return q;
}

double q_marginal(const PureState2& s, cplx a, int mode, double* err_bound) {
  if (mode != 1 && mode != 2)
    throw std::invalid_argument("q_marginal: mode must be 1 or 2");
  const int d = s.dim;
  const auto c = coherent_row(a, d);
  const auto& k = kernels::active();
  double val = 0.0;
  if (mode == 1) {
    std::vector<cplx> r(d, cplx(0.0, 0.0));
    for (int n1 = 0; n1 < d; ++n1) {
      k.caxpy(std::conj(c[n1]), &s.amps[size_t(n1) * d], r.data(), d);
    }
    val = k.norm_sq(r.data(), size_t(d));
  } else {
    for (int n1 = 0; n1 < d; ++n1) {
      val += std::norm(k.cdotc(c.data(), &s.amps[size_t(n1) * d], size_t(d)));
    }
  }
  if (err_bound) {
    const double tail = std::sqrt(coherent_tail(a, c));
    *err_bound = 2.0 * std::sqrt(val) * tail + tail * tail;
  }
  return val;
}

double q_marginal(const StateEnsemble& e, cplx a, int mode,
                  double* err_bound) {
  double q = 0.0, err = 0.0;
  for (const auto& b : e.branches) {
    double be = 0.0;
    q += b.weight * q_marginal(b.state, a, mode, err_bound ? &be : nullptr);
    err += b.weight * be;
  }
  if (err_bound) *err_bound = err + e.pruned_weight;
  return q;
}

GaussianQ GaussianQ::from_params(cplx lambda, cplx zeta) {
  const double r = std::abs(zeta);
  const double phi = std::arg(zeta);
  const double e1 = std::exp(-2.0 * r) + 1.0;
  const double e2 = std::exp(2.0 * r) + 1.0;
  const double cs = std::cos(0.5 * phi), sn = std::sin(0.5 * phi);
  GaussianQ g;
  g.center = lambda;
  g.v[0][0] = cs * cs * e1 + sn * sn * e2;
  g.v[0][1] = cs * sn * (e1 - e2);
  g.v[1][0] = g.v[0][1];
  g.v[1][1] = sn * sn * e1 + cs * cs * e2;
  g.prefactor = 1.0 / (kPi * std::cosh(r));
  return g;
}

double GaussianQ::eval(cplx alpha) const {
  const double cx = (alpha - center).real();
  const double cy = (alpha - center).imag();
  const double det = v[0][0] * v[1][1] - v[0][1] * v[1][0];
  const double quad =
      (cx * cx * v[1][1] - 2.0 * cx * cy * v[0][1] + cy * cy * v[0][0]) / det;
  return prefactor * std::exp(-2.0 * quad);
}

double q_analytic_squeezed_coherent(cplx alpha, cplx lambda, cplx zeta) {
  const double r = std::abs(zeta);
  const double phi = std::arg(zeta);
  const cplx w = alpha - lambda;
  const double ex =
      -std::norm(w) -
      std::tanh(r) * (w * w * std::polar(1.0, -phi)).real();
  return std::exp(ex) / (kPi * std::cosh(r));
}

double q_analytic_subtracted_unnormalized(cplx alpha, cplx zeta, double tau,
                                          int m) {
  constexpr int kMaxM = 16;
  if (m < 0 || m > kMaxM)
    throw std::domain_error(
        "analytic subtracted Q: derivative tables cover m in [0, 16]");
  if (!(tau >= 0.0 && tau <= 1.0))
    throw std::invalid_argument("tau must lie in [0,1]");

  double fact[2 * kMaxM + 1];
  fact[0] = 1.0;
  for (int i = 1; i <= 2 * kMaxM; ++i) fact[i] = fact[i - 1] * double(i);

  const double r = std::abs(zeta);
  const double phi = std::arg(zeta);
  const double t = std::tanh(r);
  const double g = std::sqrt(1.0 - tau);
  const double h = std::sqrt(tau);
  const cplx eiphi = std::polar(1.0, -phi);

  const cplx w0 = h * alpha;
  const cplx u0 = g * alpha;
  const double e0 = -std::norm(w0) - t * (w0 * w0 * eiphi).real() -
                    std::norm(u0);
  if (e0 < -600.0) return 0.0;

  const cplx a = g * std::conj(w0) + t * g * eiphi * w0 - h * std::conj(u0);
  const cplx cc = -0.5 * t * g * g * eiphi;

  // power tables; b = conj(a) and d = conj(c), so one table each suffices
  std::vector<cplx> apow(m + 1), cpow(m / 2 + 1);
  apow[0] = 1.0;
  for (int i = 1; i <= m; ++i) apow[i] = apow[i - 1] * a;
  cpow[0] = 1.0;
  for (int i = 1; i <= m / 2; ++i) cpow[i] = cpow[i - 1] * cc;

  cplx total(0.0, 0.0);
  for (int k = 0; k <= m; ++k) {
    cplx dk(0.0, 0.0);
    for (int j = 0; j <= k; ++j) {
      const double sj = (j & 1) ? -1.0 : 1.0;
      const int kmj = k - j;
      for (int i = 0; 2 * i <= kmj; ++i) {
        for (int l = 0; 2 * l <= kmj; ++l) {
          const cplx term = apow[kmj - 2 * i] * std::conj(apow[kmj - 2 * l]) *
                            cpow[i] * std::conj(cpow[l]);
          dk += (sj / (fact[kmj - 2 * i] * fact[kmj - 2 * l] * fact[i] *
                       fact[l] * fact[j])) *
                term;
        }
      }
    }
    const double choose_mk = fact[m] / (fact[k] * fact[m - k]);
    total += fact[k] * choose_mk * dk;
  }
  return std::exp(e0) * total.real() / (kPi * std::cosh(r));
}

double q_analytic_subtracted(cplx alpha, cplx zeta, double tau, int m) {
  const double nm = herald_prob(zeta, tau, m);
  if (!(nm > 0.0))
    throw ZeroProbabilityHerald(
        "analytic subtracted Q: herald has zero probability");
  return q_analytic_subtracted_unnormalized(alpha, zeta, tau, m) / nm;
}

double q_analytic_output(const PhasePoint& p, cplx zeta, cplx lambda,
                         double tau, int m) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  const cplx diff = (p.a1 - p.a2) * inv_sqrt2;
  const cplx sum = (p.a1 + p.a2) * inv_sqrt2;
  return q_analytic_subtracted(diff, zeta, tau, m) *
         std::exp(-std::norm(sum - lambda)) / kPi;
}

double herald_prob_analytic(cplx zeta, double tau, int m, double abs_tol) {
  const double big = 4.0 + 3.0 * std::exp(std::abs(zeta));
  auto f = [&](double x, double y) {
    return q_analytic_subtracted_unnormalized(cplx(x, y), zeta, tau, m);
  };
  return integrate_2d(f, -big, big, -big, big, abs_tol);
}

}  // namespace noonsim
