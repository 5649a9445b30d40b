#pragma once

namespace spinring {

inline constexpr const char* version = "0.1.0";

}  // namespace spinring
