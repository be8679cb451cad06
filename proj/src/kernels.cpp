#include "noonsim/kernels.hpp"

#include <stdexcept>
#include <string>

namespace noonsim::kernels {
namespace {

const Backend* g_active = nullptr;

}  // namespace

bool avx2_available() {
#if defined(__GNUC__) || defined(__clang__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

void select(std::string_view name) {
  if (name == "auto") {
    g_active = avx2_available() ? &avx2() : &scalar();
  } else if (name == "scalar") {
    g_active = &scalar();
  } else if (name == "avx2") {
    if (!avx2_available()) {
      throw std::invalid_argument("avx2 kernels requested but not supported by this CPU");
    }
    g_active = &avx2();
  } else {
    throw std::invalid_argument("unknown kernel backend: " + std::string(name));
  }
}

const Backend& active() {
  if (g_active == nullptr) {
    select("auto");
  }
  return *g_active;
}

}  // namespace noonsim::kernels
