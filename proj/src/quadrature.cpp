#include "noonsim/quadrature.hpp"

#include <cmath>
#include <stdexcept>

#include "noonsim/errors.hpp"

namespace noonsim {
namespace {

constexpr double kPi = 3.14159265358979323846264338327950288;

// Gauss-Legendre 7-point rule on [-1, 1].
constexpr double kGlX[7] = {
    -0.9491079123427585245261897, -0.7415311855993944398638648,
    -0.4058451513773971669066064, 0.0,
    0.4058451513773971669066064,  0.7415311855993944398638648,
    0.9491079123427585245261897};
constexpr double kGlW[7] = {
    0.1294849661688696932706114, 0.2797053914892766679014678,
    0.3818300505051189449503698, 0.4179591836734693877551020,
    0.3818300505051189449503698, 0.2797053914892766679014678,
    0.1294849661688696932706114};

double panel(const std::function<double(double, double)>& f, double xlo,
             double xhi, double ylo, double yhi) {
  const double hx = 0.5 * (xhi - xlo), cx = 0.5 * (xhi + xlo);
  const double hy = 0.5 * (yhi - ylo), cy = 0.5 * (yhi + ylo);
  double acc = 0.0;
  for (int i = 0; i < 7; ++i) {
    const double x = cx + hx * kGlX[i];
    double row = 0.0;
    for (int j = 0; j < 7; ++j) {
      row += kGlW[j] * f(x, cy + hy * kGlX[j]);
    }
    acc += kGlW[i] * row;
  }
  return acc * hx * hy;
}

}  // namespace

GaussHermite gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be >= 1");
  GaussHermite out;
  out.nodes.resize(n);
  out.weights.resize(n);
  const double pim4 = std::pow(kPi, -0.25);
  const int m = (n + 1) / 2;
  double z = 0.0;
  for (int i = 0; i < m; ++i) {
    // Initial guesses for the roots, largest first (standard gauher seeds).
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) -
          1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * out.nodes[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * out.nodes[1];
    } else {
      z = 2.0 * z - out.nodes[i - 2];
    }
    double pp = 0.0;
    bool converged = false;
    for (int iter = 0; iter < 100; ++iter) {
      double p1 = pim4, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
      }
      pp = std::sqrt(2.0 * n) * p2;
      const double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) {
        converged = true;
        break;
      }
    }
    if (!converged) throw NonConvergence("gauss_hermite: root iteration stuck");
    out.nodes[i] = z;
    out.nodes[n - 1 - i] = -z;
    out.weights[i] = 2.0 / (pp * pp);
    out.weights[n - 1 - i] = out.weights[i];
  }
  // nodes[i] currently descend for the first half; flip to ascending order
  std::vector<double> xs(n), ws(n);
  for (int i = 0; i < n; ++i) {
    xs[i] = out.nodes[n - 1 - i];
    ws[i] = out.weights[n - 1 - i];
  }
  out.nodes = std::move(xs);
  out.weights = std::move(ws);
  return out;
}

double integrate_2d(const std::function<double(double, double)>& f,
                    double xlo, double xhi, double ylo, double yhi,
                    double abs_tol, int max_depth) {
  struct Cell {
    double xlo, xhi, ylo, yhi, coarse, tol;
    int depth;
  };
  std::vector<Cell> stack;
  stack.push_back(
      {xlo, xhi, ylo, yhi, panel(f, xlo, xhi, ylo, yhi), abs_tol, 0});
  double total = 0.0;
  while (!stack.empty()) {
    const Cell c = stack.back();
    stack.pop_back();
    const double xm = 0.5 * (c.xlo + c.xhi), ym = 0.5 * (c.ylo + c.yhi);
    const double q00 = panel(f, c.xlo, xm, c.ylo, ym);
    const double q01 = panel(f, c.xlo, xm, ym, c.yhi);
    const double q10 = panel(f, xm, c.xhi, c.ylo, ym);
    const double q11 = panel(f, xm, c.xhi, ym, c.yhi);
    const double fine = q00 + q01 + q10 + q11;
    if (std::abs(fine - c.coarse) <= c.tol || c.depth >= max_depth) {
      total += fine;
      continue;
    }
    const double t = c.tol * 0.25;
    stack.push_back({c.xlo, xm, c.ylo, ym, q00, t, c.depth + 1});
    stack.push_back({c.xlo, xm, ym, c.yhi, q01, t, c.depth + 1});
    stack.push_back({xm, c.xhi, c.ylo, ym, q10, t, c.depth + 1});
    stack.push_back({xm, c.xhi, ym, c.yhi, q11, t, c.depth + 1});
  }
  return total;
}

}  // namespace noonsim
