#include "noonsim/fock.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "noonsim/kernels.hpp"

namespace noonsim {
namespace {

// Truncation deficit of a vector whose untruncated norm would be 1.
double deficit(const std::vector<cplx>& amps) {
  double s = kernels::active().norm_sq(amps.data(), amps.size());
  return std::max(0.0, 1.0 - s);
}

PureState1 finish_constructor(std::vector<cplx> (*build)(const void*, int),
                              const void* ctx, double mean, int dim,
                              const char* name) {
  if (dim > 0) {
    auto amps = build(ctx, dim);
    const double tail = deficit(amps);
    if (tail >= kTailTol) {
      throw TruncationError(std::string(name) + ": dim " +
                                std::to_string(dim) +
                                " leaves tail mass " + std::to_string(tail),
                            tail);
    }
    return PureState1{std::move(amps)};
  }
  int d = auto_dim(mean);
  for (int attempt = 0; attempt < 64; ++attempt) {
    auto amps = build(ctx, d);
    if (deficit(amps) < kTailTol) {
      return trim(PureState1{std::move(amps)});
    }
    d = d * 3 / 2 + 8;
  }
  throw TruncationError(std::string(name) + ": auto-sizing did not converge",
                        1.0);
}

}  // namespace

double PureState1::norm_sq() const {
  return kernels::active().norm_sq(amps.data(), amps.size());
}

double PureState2::norm_sq() const {
  return kernels::active().norm_sq(amps.data(), amps.size());
}

double StateEnsemble::total_weight() const {
  double w = 0.0;
  for (const auto& b : branches) w += b.weight;
  return w;
}

void ModeParams::validate() const {
  if (!(tau >= 0.0 && tau <= 1.0)) {
    throw std::invalid_argument("tau must lie in [0,1]");
  }
  if (m < 0) {
    throw std::invalid_argument("m must be >= 0");
  }
}

int auto_dim(double mean_photon) {
  const double mu = std::max(mean_photon, 0.0);
  return static_cast<int>(std::ceil(mu + 8.0 * std::sqrt(mu) + 20.0));
}

PureState1 make_coherent(cplx lambda, int dim) {
  struct Ctx {
    cplx lam;
  } ctx{lambda};
  auto build = [](const void* p, int d) {
    const cplx lam = static_cast<const Ctx*>(p)->lam;
    std::vector<cplx> a(d, cplx{0.0, 0.0});
    a[0] = std::exp(-std::norm(lam) / 2.0);
    for (int n = 1; n < d; ++n) {
      a[n] = a[n - 1] * lam / std::sqrt(static_cast<double>(n));
    }
    return a;
  };
  return finish_constructor(build, &ctx, std::norm(lambda), dim,
                            "make_coherent");
}

PureState1 make_squeezed_vacuum(cplx zeta, int dim) {
  struct Ctx {
    cplx zeta;
  } ctx{zeta};
  auto build = [](const void* p, int d) {
    const cplx z = static_cast<const Ctx*>(p)->zeta;
    const double r = std::abs(z);
    std::vector<cplx> a(d, cplx{0.0, 0.0});
    a[0] = 1.0 / std::sqrt(std::cosh(r));
    if (r > 0.0) {
      // amp(2k) = amp(2k-2) * (-e^{i arg zeta} tanh r) * sqrt((2k-1)/(2k))
      const cplx step = -(z / r) * std::tanh(r);
      for (int k = 1; 2 * k < d; ++k) {
        const double n = 2.0 * k;
        a[2 * k] = a[2 * k - 2] * step * std::sqrt((n - 1.0) * n) / n;
      }
    }
    return a;
  };
  const double r = std::abs(zeta);
  return finish_constructor(build, &ctx, std::sinh(r) * std::sinh(r), dim,
                            "make_squeezed_vacuum");
}

PureState1 make_displaced_squeezed(cplx lambda, cplx zeta, int dim) {
  struct Ctx {
    cplx lam, zeta;
  } ctx{lambda, zeta};
  auto build = [](const void* p, int d) {
    const Ctx& c = *static_cast<const Ctx*>(p);
    const double r = std::abs(c.zeta);
    const cplx t = (r > 0.0) ? (c.zeta / r) * std::tanh(r) : cplx{0.0, 0.0};
    const cplx lb = std::conj(c.lam);
    std::vector<cplx> a(d, cplx{0.0, 0.0});
    const double e0 =
        -std::norm(c.lam) / 2.0 - 0.5 * std::real(lb * lb * t);
    a[0] = std::exp(e0) / std::sqrt(std::cosh(r));
    const cplx drift = c.lam + lb * t;
    if (d > 1) a[1] = drift * a[0];
    for (int n = 1; n + 1 < d; ++n) {
      a[n + 1] = (drift * a[n] - t * std::sqrt(static_cast<double>(n)) *
                                     a[n - 1]) /
                 std::sqrt(n + 1.0);
    }
    return a;
  };
  const double r = std::abs(zeta);
  const double mu = std::norm(lambda) + std::sinh(r) * std::sinh(r);
  return finish_constructor(build, &ctx, mu, dim, "make_displaced_squeezed");
}

PureState1 make_fock(int n, int dim) {
  if (n < 0 || n >= dim) {
    throw std::invalid_argument("make_fock: need 0 <= n < dim");
  }
  PureState1 s;
  s.amps.assign(dim, cplx{0.0, 0.0});
  s.amps[n] = 1.0;
  return s;
}

PureState1 make_vacuum(int dim) { return make_fock(0, dim); }

PureState2 tensor(const PureState1& a, const PureState1& b) {
  const int da = a.dim(), db = b.dim();
  if (da < 1 || db < 1) {
    throw std::invalid_argument("tensor: empty factor state");
  }
  // Size the square grid to hold every populated total-photon sector, so a
  // beam splitter applied next is exactly unitary without regrowing.
  PureState2 out;
  out.dim = da + db - 1;
  out.amps.assign(static_cast<size_t>(out.dim) * out.dim, cplx{0.0, 0.0});
  for (int n1 = 0; n1 < da; ++n1) {
    for (int n2 = 0; n2 < db; ++n2) {
      out.at(n1, n2) = a.amps[n1] * b.amps[n2];
    }
  }
  return out;
}

std::vector<double> photon_distribution(const PureState1& s) {
  std::vector<double> p(s.amps.size());
  for (size_t i = 0; i < p.size(); ++i) p[i] = std::norm(s.amps[i]);
  return p;
}

std::vector<double> photon_distribution(const PureState2& s) {
  std::vector<double> p(s.amps.size());
  for (size_t i = 0; i < p.size(); ++i) p[i] = std::norm(s.amps[i]);
  return p;
}

double mean_photon(const PureState1& s) {
  double num = 0.0, den = 0.0;
  for (int n = 0; n < s.dim(); ++n) {
    const double w = std::norm(s.amps[n]);
    num += n * w;
    den += w;
  }
  if (den <= 0.0) throw std::invalid_argument("mean_photon: zero state");
  return num / den;
}

double mean_photon(const PureState2& s) {
  double num = 0.0, den = 0.0;
  for (int n1 = 0; n1 < s.dim; ++n1) {
    for (int n2 = 0; n2 < s.dim; ++n2) {
      const double w = std::norm(s.at(n1, n2));
      num += (n1 + n2) * w;
      den += w;
    }
  }
  if (den <= 0.0) throw std::invalid_argument("mean_photon: zero state");
  return num / den;
}

double mean_photon_mode(const PureState2& s, int mode) {
  if (mode != 1 && mode != 2) {
    throw std::invalid_argument("mean_photon_mode: mode must be 1 or 2");
  }
  double num = 0.0, den = 0.0;
  for (int n1 = 0; n1 < s.dim; ++n1) {
    for (int n2 = 0; n2 < s.dim; ++n2) {
      const double w = std::norm(s.at(n1, n2));
      num += (mode == 1 ? n1 : n2) * w;
      den += w;
    }
  }
  if (den <= 0.0) throw std::invalid_argument("mean_photon_mode: zero state");
  return num / den;
}

cplx inner(const PureState1& a, const PureState1& b) {
  const size_t n = std::min(a.amps.size(), b.amps.size());
  return kernels::active().cdotc(a.amps.data(), b.amps.data(), n);
}

cplx inner(const PureState2& a, const PureState2& b) {
  if (a.dim == b.dim) {
    return kernels::active().cdotc(a.amps.data(), b.amps.data(),
                                   a.amps.size());
  }
  const PureState2& small = (a.dim < b.dim) ? a : b;
  const PureState2& big = (a.dim < b.dim) ? b : a;
  cplx acc{0.0, 0.0};
  for (int n1 = 0; n1 < small.dim; ++n1) {
    const cplx* rs = &small.amps[static_cast<size_t>(n1) * small.dim];
    const cplx* rb = &big.amps[static_cast<size_t>(n1) * big.dim];
    acc += (&a == &small)
               ? kernels::active().cdotc(rs, rb, small.dim)
               : kernels::active().cdotc(rb, rs, small.dim);
  }
  return acc;
}

std::pair<PureState1, double> normalize(const PureState1& s) {
  const double n = std::sqrt(s.norm_sq());
  if (n <= 0.0) throw std::invalid_argument("normalize: zero state");
  PureState1 out = s;
  for (auto& a : out.amps) a /= n;
  return {std::move(out), n};
}

std::pair<PureState2, double> normalize(const PureState2& s) {
  const double n = std::sqrt(s.norm_sq());
  if (n <= 0.0) throw std::invalid_argument("normalize: zero state");
  PureState2 out = s;
  for (auto& a : out.amps) a /= n;
  return {std::move(out), n};
}

PureState1 trim(const PureState1& s, double tol) {
  const double total = s.norm_sq();
  double suffix = 0.0;
  int keep = s.dim();
  for (int n = s.dim() - 1; n >= 1; --n) {
    suffix += std::norm(s.amps[n]);
    if (suffix > tol * total) break;
    keep = n;
  }
  PureState1 out;
  out.amps.assign(s.amps.begin(), s.amps.begin() + keep);
  return out;
}

PureState2 trim(const PureState2& s, double tol) {
  const double total = s.norm_sq();
  // Mass in the L-shaped shell max(n1,n2) == d, accumulated from the top.
  std::vector<double> shell(s.dim, 0.0);
  for (int n1 = 0; n1 < s.dim; ++n1) {
    for (int n2 = 0; n2 < s.dim; ++n2) {
      shell[std::max(n1, n2)] += std::norm(s.at(n1, n2));
    }
  }
  double suffix = 0.0;
  int keep = s.dim;
  for (int d = s.dim - 1; d >= 1; --d) {
    suffix += shell[d];
    if (suffix > tol * total) break;
    keep = d;
  }
  if (keep == s.dim) return s;
  PureState2 out;
  out.dim = keep;
  out.amps.assign(static_cast<size_t>(keep) * keep, cplx{0.0, 0.0});
  for (int n1 = 0; n1 < keep; ++n1) {
    for (int n2 = 0; n2 < keep; ++n2) out.at(n1, n2) = s.at(n1, n2);
  }
  return out;
}

PureState2 truncate_to(const PureState2& s, int dim) {
  if (dim < 1) throw std::invalid_argument("truncate_to: dim must be >= 1");
  PureState2 out;
  out.dim = dim;
  out.amps.assign(static_cast<size_t>(dim) * dim, cplx{0.0, 0.0});
  const int d = std::min(dim, s.dim);
  for (int n1 = 0; n1 < d; ++n1) {
    for (int n2 = 0; n2 < d; ++n2) out.at(n1, n2) = s.at(n1, n2);
  }
  return normalize(out).first;
}

double off_edge_mass(const PureState2& s, int k) {
  double off = 0.0, total = 0.0;
  for (int n1 = 0; n1 < s.dim; ++n1) {
    for (int n2 = 0; n2 < s.dim; ++n2) {
      const double w = std::norm(s.at(n1, n2));
      total += w;
      if (std::min(n1, n2) >= k) off += w;
    }
  }
  if (total <= 0.0) throw std::invalid_argument("off_edge_mass: zero state");
  return off / total;
}

}  // namespace noonsim
