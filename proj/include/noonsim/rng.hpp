#pragma once

#include <cmath>
#include <cstdint>

namespace noonsim {

// SplitMix64: tiny, fast, and fully specified, so streams are reproducible
// across compilers and standard libraries. std::normal_distribution is
// implementation-defined and would break bitwise determinism of outputs.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // standard normal via Box-Muller, one value per call (pair cached)
  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    if (u1 < 0x1.0p-53) u1 = 0x1.0p-53;
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

// Derive a child seed from (seed, index) so that the k-th stream is
// independent of how many streams came before it (prefix stability).
inline std::uint64_t child_seed(std::uint64_t seed, std::uint64_t index) {
  SplitMix64 g(seed ^ (0x632be59bd9b4e019ULL * (index + 1)));
  return g.next_u64();
}

}  // namespace noonsim
