#pragma once

namespace srpair {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr const char* kToolName = "srpair";

}  // namespace srpair
