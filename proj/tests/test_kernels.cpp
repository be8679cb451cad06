#include <doctest.h>

#include <vector>

#include "noonsim/kernels.hpp"
#include "noonsim/rng.hpp"

using namespace noonsim;
using kernels::cplx;

namespace {

struct Arrays {
  std::vector<cplx> x, y;
  std::vector<double> r, off;
  cplx a;
};

Arrays random_arrays(size_t n, std::uint64_t seed) {
  SplitMix64 g(seed);
  auto u = [&] { return 2.0 * g.uniform() - 1.0; };
  Arrays v;
  v.x.resize(n);
  v.y.resize(n);
  v.r.resize(n);
  v.off.resize(n > 0 ? n - 1 : 0);
  for (auto& z : v.x) z = {3 * u(), 3 * u()};
  for (auto& z : v.y) z = {3 * u(), 3 * u()};
  for (auto& d : v.r) d = 3 * u();
  for (auto& d : v.off) d = 3 * u();
  v.a = {u(), u()};
  return v;
}

}  // namespace

TEST_CASE("scalar kernels match straightforward loops") {
  const auto& k = kernels::scalar();
  const auto v = random_arrays(33, 7);

  double ns = 0.0;
  cplx dot(0, 0);
  for (size_t i = 0; i < v.x.size(); ++i) {
    ns += std::norm(v.x[i]);
    dot += std::conj(v.x[i]) * v.y[i];
  }
  CHECK(k.norm_sq(v.x.data(), v.x.size()) == doctest::Approx(ns).epsilon(1e-14));
  CHECK(std::abs(k.cdotc(v.x.data(), v.y.data(), v.x.size()) - dot) < 1e-12);

  auto y1 = v.y;
  k.caxpy(v.a, v.x.data(), y1.data(), y1.size());
  for (size_t i = 0; i < y1.size(); ++i)
    CHECK(std::abs(y1[i] - (v.y[i] + v.a * v.x[i])) < 1e-14);

  auto y2 = v.y;
  k.raxpy(v.a, v.r.data(), y2.data(), y2.size());
  for (size_t i = 0; i < y2.size(); ++i)
    CHECK(std::abs(y2[i] - (v.y[i] + v.a * v.r[i])) < 1e-14);

  std::vector<cplx> t(v.x.size());
  k.tridiag(v.off.data(), v.x.data(), t.data(), v.x.size());
  for (size_t i = 0; i < t.size(); ++i) {
    cplx want(0, 0);
    if (i > 0) want += v.off[i - 1] * v.x[i - 1];
    if (i + 1 < v.x.size()) want += v.off[i] * v.x[i + 1];
    CHECK(std::abs(t[i] - want) < 1e-14);
  }
}

TEST_CASE("avx2 backend agrees with scalar on every size incl. remainders") {
  if (!kernels::avx2_available()) return;  // nothing to compare on this cpu
  const auto& ks = kernels::scalar();
  const auto& kv = kernels::avx2();

  // sizes straddling the vector width: remainder handling is where simd
  // kernels usually go wrong
  for (size_t n : {1u, 2u, 3u, 4u, 5u, 7u, 8u, 9u, 15u, 16u, 17u, 64u, 97u}) {
    const auto v = random_arrays(n, 1000 + n);

    CHECK(std::abs(ks.norm_sq(v.x.data(), n) - kv.norm_sq(v.x.data(), n)) <
          1e-12);
    CHECK(std::abs(ks.cdotc(v.x.data(), v.y.data(), n) -
                   kv.cdotc(v.x.data(), v.y.data(), n)) < 1e-12);

    auto y1 = v.y, y2 = v.y;
    ks.caxpy(v.a, v.x.data(), y1.data(), n);
    kv.caxpy(v.a, v.x.data(), y2.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);

    y1 = v.y;
    y2 = v.y;
    ks.raxpy(v.a, v.r.data(), y1.data(), n);
    kv.raxpy(v.a, v.r.data(), y2.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(std::abs(y1[i] - y2[i]) < 1e-13);

    std::vector<cplx> t1(n), t2(n);
    ks.tridiag(v.off.data(), v.x.data(), t1.data(), n);
    kv.tridiag(v.off.data(), v.x.data(), t2.data(), n);
    for (size_t i = 0; i < n; ++i) CHECK(std::abs(t1[i] - t2[i]) < 1e-13);
  }
}

TEST_CASE("backend selection is explicit and sticky") {
  kernels::select("scalar");
  CHECK(std::string(kernels::active().name) == "scalar");
  if (kernels::avx2_available()) {
    kernels::select("avx2");
    CHECK(std::string(kernels::active().name) == "avx2");
  }
  kernels::select("auto");
  if (kernels::avx2_available())
    CHECK(std::string(kernels::active().name) == "avx2");
  else
    CHECK(std::string(kernels::active().name) == "scalar");
  CHECK_THROWS_AS(kernels::select("sse9"), std::invalid_argument);
}
