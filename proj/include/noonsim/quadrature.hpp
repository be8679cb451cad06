#pragma once

#include <functional>
#include <vector>

namespace noonsim {

// Nodes and weights for integral of exp(-x^2) f(x) over the real line.
struct GaussHermite {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussHermite gauss_hermite(int n);

// Adaptive 2D integration of f over [xlo,xhi] x [ylo,yhi] by recursive
// bisection, comparing one Gauss-Legendre 7x7 panel against its four
// children. abs_tol is the total error budget for the whole box.
double integrate_2d(const std::function<double(double, double)>& f,
                    double xlo, double xhi, double ylo, double yhi,
                    double abs_tol, int max_depth = 24);

}  // namespace noonsim
