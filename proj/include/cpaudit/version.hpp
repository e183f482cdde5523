#pragma once

namespace cpaudit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace cpaudit
