#pragma once

#include <functional>
#include <vector>

namespace noonsim::optim {

struct NmOptions {
  int max_iter = 4000;
  double fatol = 1e-11;
  double xatol = 1e-7;
};

struct NmResult {
  std::vector<double> x;
  double fval = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Minimizes f. Deterministic: the simplex is seeded from x0 alone.
NmResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                     const std::vector<double>& x0, const NmOptions& opts = {});

// Minimizes a unimodal f on [lo, hi] to the given x tolerance.
double golden_section(const std::function<double(double)>& f, double lo,
                      double hi, double xtol = 1e-9);

}  // namespace noonsim::optim
