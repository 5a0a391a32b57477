#pragma once

#include <numbers>

namespace qkt::constants {

// CODATA 2018 exact / recommended values, SI.
inline constexpr double hbar = 1.054571817e-34;   // J s
inline constexpr double k_B = 1.380649e-23;       // J / K
inline constexpr double bohr_radius = 5.29177210903e-11;  // m

inline constexpr double pi = std::numbers::pi;

// 87Rb
inline constexpr double rb87_mass = 1.44316e-25;  // kg
inline constexpr double rb87_scattering_length = 5.29e-9;  // m, ~100 a_0
inline constexpr double rb87_L3 = 5.8e-42;  // m^6 / s  (5.8e-30 cm^6/s)

// Riemann zeta(3), zeta(2)
inline constexpr double zeta3 = 1.2020569031595942854;
inline constexpr double zeta2 = std::numbers::pi * std::numbers::pi / 6.0;

}  // namespace qkt::constants
