#pragma once

namespace gait {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace gait
