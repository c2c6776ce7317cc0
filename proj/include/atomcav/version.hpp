#ifndef ATOMCAV_VERSION_HPP
#define ATOMCAV_VERSION_HPP

#include <string_view>

namespace atomcav {

inline constexpr std::string_view kVersion = "0.1.0";

}

#endif
