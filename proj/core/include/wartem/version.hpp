#pragma once

namespace wartem {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wartem
