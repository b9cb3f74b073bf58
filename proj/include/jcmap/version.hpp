#pragma once

namespace jcmap {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace jcmap
