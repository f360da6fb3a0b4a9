#pragma once

#include <string_view>

namespace enscen {

inline constexpr std::string_view kToolName = "enscen";
inline constexpr std::string_view kVersion = "0.1.0";

}  // namespace enscen
