#include "noonsim/optim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace noonsim::optim {

namespace {

// Initial simplex: perturb each coordinate of x0 by 5% (or a small absolute
// step when the coordinate is zero).
std::vector<std::vector<double>> initial_simplex(const std::vector<double>& x0) {
  const double nonzdelt = 0.05;
  const double zdelt = 0.00025;
  const size_t n = x0.size();
  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (size_t k = 0; k < n; ++k) {
    double& xk = simplex[k + 1][k];
    if (xk != 0.0) {
      xk *= 1.0 + nonzdelt;
    } else {
      xk = zdelt;
    }
  }
  return simplex;
}

}  // namespace

NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, const NmOptions& opts) {
  const double rho = 1.0, chi = 2.0, psi = 0.5, sigma = 0.5;
  const size_t n = x0.size();

  auto simplex = initial_simplex(x0);
  std::vector<double> fvals(n + 1);
  for (size_t i = 0; i <= n; ++i) fvals[i] = f(simplex[i]);

  std::vector<size_t> order(n + 1);
  auto sort_simplex = [&] {
    std::iota(order.begin(), order.end(), size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return fvals[a] < fvals[b]; });
    std::vector<std::vector<double>> s2(n + 1);
    std::vector<double> f2(n + 1);
    for (size_t i = 0; i <= n; ++i) {
      s2[i] = simplex[order[i]];
      f2[i] = fvals[order[i]];
    }
    simplex.swap(s2);
    fvals.swap(f2);
  };
  sort_simplex();

  NmResult res;
  int iter = 0;
  for (; iter < opts.max_iter; ++iter) {
    double xspread = 0.0;
    for (size_t i = 1; i <= n; ++i)
      for (size_t k = 0; k < n; ++k)
        xspread = std::max(xspread, std::abs(simplex[i][k] - simplex[0][k]));
    const double fspread = std::abs(fvals[n] - fvals[0]);
    if (xspread <= opts.xatol && fspread <= opts.fatol) {
      res.converged = true;
      break;
    }

    // Centroid of all but the worst vertex.
    std::vector<double> xbar(n, 0.0);
    for (size_t i = 0; i < n; ++i)
      for (size_t k = 0; k < n; ++k) xbar[k] += simplex[i][k] / double(n);

    auto affine = [&](double t) {
      std::vector<double> x(n);
      for (size_t k = 0; k < n; ++k)
        x[k] = xbar[k] + t * (xbar[k] - simplex[n][k]);
      return x;
    };

    auto xr = affine(rho);
    const double fr = f(xr);
    bool shrink = false;

    if (fr < fvals[0]) {
      auto xe = affine(rho * chi);
      const double fe = f(xe);
      if (fe < fr) {
        simplex[n] = std::move(xe);
        fvals[n] = fe;
      } else {
        simplex[n] = std::move(xr);
        fvals[n] = fr;
      }
    } else if (fr < fvals[n - 1]) {
      simplex[n] = std::move(xr);
      fvals[n] = fr;
    } else if (fr < fvals[n]) {
      // Outside contraction.
      auto xc = affine(rho * psi);
      const double fc = f(xc);
      if (fc <= fr) {
        simplex[n] = std::move(xc);
        fvals[n] = fc;
      } else {
        shrink = true;
      }
    } else {
      // Inside contraction.
      auto xcc = affine(-psi);
      const double fcc = f(xcc);
      if (fcc < fvals[n]) {
        simplex[n] = std::move(xcc);
        fvals[n] = fcc;
      } else {
        shrink = true;
      }
    }

    if (shrink) {
      for (size_t i = 1; i <= n; ++i) {
        for (size_t k = 0; k < n; ++k)
          simplex[i][k] = simplex[0][k] + sigma * (simplex[i][k] - simplex[0][k]);
        fvals[i] = f(simplex[i]);
      }
    }
    sort_simplex();
  }

  res.x = simplex[0];
  res.fval = fvals[0];
  res.iterations = iter;
  return res;
}

double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double xtol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > xtol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace noonsim::optim
