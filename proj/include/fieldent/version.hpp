#pragma once

namespace fieldent {

inline constexpr const char* version = "1.0.0";

} // namespace fieldent
