#pragma once

namespace fracpar {

inline constexpr const char* kVersion = "1.0.0";
inline constexpr const char* kToolName = "fracpar";

}  // namespace fracpar
