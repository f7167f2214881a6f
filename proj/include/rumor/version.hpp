#pragma once

namespace rumor {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace rumor
