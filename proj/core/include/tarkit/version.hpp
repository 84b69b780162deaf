#pragma once

#include <string_view>

namespace tarkit {

inline constexpr std::string_view kToolName = "tarkit";
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace tarkit
