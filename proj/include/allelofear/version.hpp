#pragma once

namespace allelofear {

inline constexpr const char* kVersion = "0.1.0";

} // namespace allelofear
