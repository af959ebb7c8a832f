#pragma once

namespace rsbound {
inline constexpr const char* kVersion = "1.0.0";
}
