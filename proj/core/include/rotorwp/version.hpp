#ifndef ROTORWP_VERSION_HPP
#define ROTORWP_VERSION_HPP

namespace rotorwp {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace rotorwp

#endif  // ROTORWP_VERSION_HPP
