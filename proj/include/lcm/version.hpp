#ifndef LCM_VERSION_HPP
#define LCM_VERSION_HPP

namespace lcm {
inline constexpr const char* kVersion = "0.1.0";
}

#endif
