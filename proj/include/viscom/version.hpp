#pragma once

namespace viscom {

inline constexpr const char* kToolName = "viscom";
inline constexpr const char* kToolVersion = "1.0.0";

}  // namespace viscom
