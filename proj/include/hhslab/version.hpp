#pragma once

namespace hhslab {

inline constexpr const char* kToolName = "hhslab";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace hhslab
