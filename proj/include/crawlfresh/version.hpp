#pragma once

namespace crawlfresh {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace crawlfresh
