#pragma once

namespace hbtsim {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace hbtsim
