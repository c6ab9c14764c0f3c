#pragma once

#include <numbers>

namespace icosim::codata {

// CODATA 2018 exact defining constants (SI).
inline constexpr double planck = 6.62607015e-34;        // J s
inline constexpr double boltzmann = 1.380649e-23;       // J / K
inline constexpr double light_speed = 299792458.0;      // m / s
inline constexpr double hbar = planck / (2.0 * std::numbers::pi);

}  // namespace icosim::codata
