#pragma once

namespace noonsim {

inline constexpr const char* kVersion = "1.0.0";

}
