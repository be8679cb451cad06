#include "noonsim/kernels.hpp"

namespace noonsim::kernels {
namespace {

double norm_sq_(const cplx* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
  }
  return acc;
}

cplx cdotc_(const cplx* x, const cplx* y, std::size_t n) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    re += x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
    im += x[i].real() * y[i].imag() - x[i].imag() * y[i].real();
  }
  return {re, im};
}

void caxpy_(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    y[i] += cplx{ar * xr - ai * xi, ar * xi + ai * xr};
  }
}

void raxpy_(cplx a, const double* r, cplx* y, std::size_t n) {
  const double ar = a.real(), ai = a.imag();
  for (std::size_t i = 0; i < n; ++i) {
    y[i] += cplx{ar * r[i], ai * r[i]};
  }
}

void tridiag_(const double* off, const cplx* x, cplx* y, std::size_t n) {
  if (n == 1) {
    y[0] = 0.0;
    return;
  }
  y[0] = off[0] * x[1];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    y[i] = off[i - 1] * x[i - 1] + off[i] * x[i + 1];
  }
  y[n - 1] = off[n - 2] * x[n - 2];
}

}  // namespace

const Backend& scalar() {
  static const Backend b{norm_sq_, cdotc_, caxpy_, raxpy_, tridiag_, "scalar"};
  return b;
}

}  // namespace noonsim::kernels
