#pragma once

namespace epchiral {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace epchiral
