#pragma once

namespace typicality {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace typicality
