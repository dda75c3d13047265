#pragma once

namespace vesselsim {
inline constexpr const char* kVersion = "0.1.0";
}
