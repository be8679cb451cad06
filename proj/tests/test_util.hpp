#pragma once

// Small dense oracles for the tests: an O(d^3) matrix exponential applied to
// a vector, used to check the production beam splitter against first
// principles on sizes where cubic cost is irrelevant.

#include <cmath>
#include <vector>

#include "noonsim/fock.hpp"

namespace testutil {

using noonsim::cplx;

// Dense exp(A) v by scaling-and-squaring on the Taylor series. A is d x d
// row-major. Fine for d up to a few hundred.
inline std::vector<cplx> expm_apply(const std::vector<cplx>& a, int d,
                                    std::vector<cplx> v) {
  double amax = 0.0;
  for (const auto& x : a) amax = std::max(amax, std::abs(x));
  int squarings = 0;
  double scale = 1.0;
  while (amax * scale * d > 0.5) {
    scale *= 0.5;
    ++squarings;
  }

  auto matvec = [&](const std::vector<cplx>& x) {
    std::vector<cplx> y(d, cplx(0.0, 0.0));
    for (int i = 0; i < d; ++i) {
      cplx acc(0.0, 0.0);
      for (int j = 0; j < d; ++j) acc += a[size_t(i) * d + j] * x[j];
      y[i] = acc * scale;
    }
    return y;
  };

  // repeated squaring of exp(A/2^s) acting on v needs the matrix, not just
  // the action; build exp(A/2^s) densely instead
  std::vector<cplx> e(size_t(d) * d, cplx(0.0, 0.0));
  for (int i = 0; i < d; ++i) e[size_t(i) * d + i] = 1.0;
  std::vector<cplx> term = e;  // current Taylor term, starts at I
  for (int k = 1; k <= 30; ++k) {
    std::vector<cplx> nt(size_t(d) * d, cplx(0.0, 0.0));
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < d; ++l) {
        const cplx t = term[size_t(i) * d + l] * (scale / double(k));
        if (t == cplx(0.0, 0.0)) continue;
        for (int j = 0; j < d; ++j)
          nt[size_t(i) * d + j] += t * a[size_t(l) * d + j];
      }
    term = std::move(nt);
    double tmax = 0.0;
    for (const auto& x : term) tmax = std::max(tmax, std::abs(x));
    for (size_t i = 0; i < e.size(); ++i) e[i] += term[i];
    if (tmax < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) {
    std::vector<cplx> sq(size_t(d) * d, cplx(0.0, 0.0));
    for (int i = 0; i < d; ++i)
      for (int l = 0; l < d; ++l) {
        const cplx t = e[size_t(i) * d + l];
        if (t == cplx(0.0, 0.0)) continue;
        for (int j = 0; j < d; ++j)
          sq[size_t(i) * d + j] += t * e[size_t(l) * d + j];
      }
    e = std::move(sq);
  }

  std::vector<cplx> y(d, cplx(0.0, 0.0));
  for (int i = 0; i < d; ++i) {
    cplx acc(0.0, 0.0);
    for (int j = 0; j < d; ++j) acc += e[size_t(i) * d + j] * v[j];
    y[i] = acc;
  }
  (void)matvec;
  return y;
}

// Beam splitter generator theta (a1^d a2 - a2^d a1) restricted to the
// total-photon-N sector, in the basis |k, N-k>, k = 0..N. Row-major.
inline std::vector<cplx> bs_generator_sector(int n, double theta) {
  const int d = n + 1;
  std::vector<cplx> a(size_t(d) * d, cplx(0.0, 0.0));
  for (int k = 0; k + 1 <= n; ++k) {
    // a1^d a2 : |k, n-k> -> sqrt((k+1)(n-k)) |k+1, n-k-1>
    const double c = std::sqrt(double(k + 1) * double(n - k));
    a[size_t(k + 1) * d + k] += theta * c;
    a[size_t(k) * d + (k + 1)] -= theta * c;
  }
  return a;
}

inline double max_abs_diff(const std::vector<cplx>& x,
                           const std::vector<cplx>& y) {
  double m = 0.0;
  for (size_t i = 0; i < x.size() && i < y.size(); ++i)
    m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

}  // namespace testutil
