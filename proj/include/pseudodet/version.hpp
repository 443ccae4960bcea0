#pragma once

namespace pseudodet {

inline constexpr const char* kVersion = "0.1.0";
inline constexpr int kFixtureFormatVersion = 1;

}  // namespace pseudodet
