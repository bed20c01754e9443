#pragma once

namespace bellsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace bellsim
