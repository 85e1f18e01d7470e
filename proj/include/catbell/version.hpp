#pragma once

namespace catbell {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace catbell
