#pragma once

namespace holonomy {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace holonomy
