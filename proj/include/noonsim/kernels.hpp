#pragma once
#include <complex>
#include <cstddef>
#include <string_view>

// Hot inner loops of the simulator, as a small fixed vocabulary of vector
// operations over complex<double> arrays. Two implementations exist: a plain
// scalar one (reference, always available) and an AVX2+FMA one picked at
// runtime when the cpu supports it. Everything above this layer is written
// against the dispatch table so the numeric results can be cross-checked
// between backends in the test suite.

namespace noonsim::kernels {

using cplx = std::complex<double>;

struct Backend {
  // sum |x_i|^2
  double (*norm_sq)(const cplx* x, std::size_t n);
  // sum conj(x_i) * y_i
  cplx (*cdotc)(const cplx* x, const cplx* y, std::size_t n);
  // y_i += a * x_i
  void (*caxpy)(cplx a, const cplx* x, cplx* y, std::size_t n);
  // y_i += a * r_i with a real-valued array r
  void (*raxpy)(cplx a, const double* r, cplx* y, std::size_t n);
  // y = S x where S is symmetric tridiagonal with zero diagonal and
  // off-diagonal entries off[0..n-2]; the Chebyshev beam-splitter step
  void (*tridiag)(const double* off, const cplx* x, cplx* y, std::size_t n);
  const char* name;
};

const Backend& scalar();
const Backend& avx2();  // valid only when avx2_available()
bool avx2_available();

// runtime selection: "auto" (default), "scalar", "avx2"
void select(std::string_view name);
const Backend& active();

}  // namespace noonsim::kernels
