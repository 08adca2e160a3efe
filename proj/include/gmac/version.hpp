#pragma once

namespace gmac {

inline constexpr const char* kVersion = "0.1.0";

}
