#pragma once

namespace tangle {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tangle
