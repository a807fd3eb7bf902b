#pragma once

namespace veriscale {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace veriscale
