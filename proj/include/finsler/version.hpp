#pragma once

namespace finsler {

inline constexpr const char* kEngineName = "finslergeo";
inline constexpr const char* kEngineVersion = "0.1.0";

} // namespace finsler
