#pragma once

namespace spider {

inline constexpr const char* kToolkitName = "sounding-spider";
inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr int kSchemaVersion = 1;

}  // namespace spider
