#pragma once

namespace qpe {

inline constexpr const char *kVersion = "1.0.0";

}  // namespace qpe
