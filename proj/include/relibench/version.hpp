#pragma once

namespace relibench {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace relibench
