#pragma once

namespace latmix {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace latmix
