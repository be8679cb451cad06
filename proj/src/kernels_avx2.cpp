// AVX2 + FMA variants of the hot vector kernels. Compiled with -mavx2 -mfma
// for this translation unit only; callers must check avx2_available() before
// selecting this backend. Complex numbers are processed two at a time as
// [re0, im0, re1, im1] packed doubles.

#include <immintrin.h>

#include "noonsim/kernels.hpp"

namespace noonsim::kernels {
namespace {

double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(lo, _mm_unpackhi_pd(lo, lo)));
}

double norm_sq_(const cplx* x, std::size_t n) {
  const double* p = reinterpret_cast<const double*>(x);
  const std::size_t d = 2 * n;
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= d; i += 4) {
    __m256d v = _mm256_loadu_pd(p + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double s = hsum(acc);
  for (; i < d; ++i) s += p[i] * p[i];
  return s;
}

cplx cdotc_(const cplx* x, const cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  const double* py = reinterpret_cast<const double*>(y);
  // Im part needs xr*yi - xi*yr: multiply x by pair-swapped y, then flip the
  // sign of the odd lanes before accumulating.
  const __m256d signs = _mm256_setr_pd(0.0, -0.0, 0.0, -0.0);
  __m256d acc_re = _mm256_setzero_pd();
  __m256d acc_im = _mm256_setzero_pd();
  std::size_t i = 0;
  const std::size_t d = 2 * n;
  for (; i + 4 <= d; i += 4) {
    __m256d vx = _mm256_loadu_pd(px + i);
    __m256d vy = _mm256_loadu_pd(py + i);
    acc_re = _mm256_fmadd_pd(vx, vy, acc_re);
    __m256d vys = _mm256_permute_pd(vy, 0x5);
    __m256d prod = _mm256_xor_pd(_mm256_mul_pd(vx, vys), signs);
    acc_im = _mm256_add_pd(acc_im, prod);
  }
  double re = hsum(acc_re);
  double im = hsum(acc_im);
  for (std::size_t k = i / 2; k < n; ++k) {
    re += px[2 * k] * py[2 * k] + px[2 * k + 1] * py[2 * k + 1];
    im += px[2 * k] * py[2 * k + 1] - px[2 * k + 1] * py[2 * k];
  }
  return {re, im};
}

void caxpy_(cplx a, const cplx* x, cplx* y, std::size_t n) {
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  const __m256d ar = _mm256_set1_pd(a.real());
  const __m256d ai = _mm256_set1_pd(a.imag());
  std::size_t i = 0;
  const std::size_t d = 2 * n;
  for (; i + 4 <= d; i += 4) {
    __m256d vx = _mm256_loadu_pd(px + i);
    __m256d vxs = _mm256_permute_pd(vx, 0x5);
    // fmaddsub: even lanes ar*xr - ai*xi, odd lanes ar*xi + ai*xr
    __m256d prod = _mm256_fmaddsub_pd(ar, vx, _mm256_mul_pd(ai, vxs));
    _mm256_storeu_pd(py + i, _mm256_add_pd(_mm256_loadu_pd(py + i), prod));
  }
  const double sar = a.real(), sai = a.imag();
  for (std::size_t k = i / 2; k < n; ++k) {
    const double xr = px[2 * k], xi = px[2 * k + 1];
    py[2 * k] += sar * xr - sai * xi;
    py[2 * k + 1] += sar * xi + sai * xr;
  }
}

void raxpy_(cplx a, const double* r, cplx* y, std::size_t n) {
  double* py = reinterpret_cast<double*>(y);
  const __m256d av =
      _mm256_broadcast_pd(reinterpret_cast<const __m128d*>(&a));
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    __m128d r0 = _mm_loaddup_pd(r + k);
    __m128d r1 = _mm_loaddup_pd(r + k + 1);
    __m256d rv = _mm256_set_m128d(r1, r0);
    __m256d vy = _mm256_loadu_pd(py + 2 * k);
    _mm256_storeu_pd(py + 2 * k, _mm256_fmadd_pd(av, rv, vy));
  }
  for (; k < n; ++k) {
    py[2 * k] += a.real() * r[k];
    py[2 * k + 1] += a.imag() * r[k];
  }
}

void tridiag_(const double* off, const cplx* x, cplx* y, std::size_t n) {
  if (n == 1) {
    y[0] = 0.0;
    return;
  }
  y[0] = off[0] * x[1];
  const double* px = reinterpret_cast<const double*>(x);
  double* py = reinterpret_cast<double*>(y);
  std::size_t i = 1;
  for (; i + 2 < n; i += 2) {
    // y[i], y[i+1] together: off pairs duplicated across lanes
    __m128d lo0 = _mm_loaddup_pd(off + i - 1);
    __m128d lo1 = _mm_loaddup_pd(off + i);
    __m256d offlo = _mm256_set_m128d(lo1, lo0);
    __m128d hi0 = lo1;
    __m128d hi1 = _mm_loaddup_pd(off + i + 1);
    __m256d offhi = _mm256_set_m128d(hi1, hi0);
    __m256d xm = _mm256_loadu_pd(px + 2 * (i - 1));
    __m256d xp = _mm256_loadu_pd(px + 2 * (i + 1));
    __m256d v = _mm256_fmadd_pd(offhi, xp, _mm256_mul_pd(offlo, xm));
    _mm256_storeu_pd(py + 2 * i, v);
  }
  for (; i + 1 < n; ++i) {
    y[i] = off[i - 1] * x[i - 1] + off[i] * x[i + 1];
  }
  y[n - 1] = off[n - 2] * x[n - 2];
}

}  // namespace

const Backend& avx2() {
  static const Backend b{norm_sq_, cdotc_, caxpy_, raxpy_, tridiag_, "avx2"};
  return b;
}

}  // namespace noonsim::kernels
