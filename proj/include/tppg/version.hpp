#pragma once

namespace tppg {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace tppg
