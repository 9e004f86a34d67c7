#pragma once

namespace marx {

inline constexpr const char* kToolName = "marxgen";
inline constexpr const char* kVersion = "0.1.0";

} // namespace marx
