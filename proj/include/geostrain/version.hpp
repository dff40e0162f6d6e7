#pragma once

namespace geostrain {

inline constexpr const char* version = "0.1.0";

}  // namespace geostrain
