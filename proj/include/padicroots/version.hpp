#pragma once

namespace padicroots {
inline constexpr const char* kVersion = "0.1.0";
}
