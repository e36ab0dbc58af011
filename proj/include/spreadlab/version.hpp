#pragma once

namespace spreadlab {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace spreadlab
