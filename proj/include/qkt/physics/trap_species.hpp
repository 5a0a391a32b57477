#pragma once

namespace qkt {

/// Axially symmetric harmonic trap plus the atomic constants that set every
/// unit scale of the model. All fields SI.
struct TrapSpecies {
  double omega_r = 0.0;            // rad/s
  double omega_z = 0.0;            // rad/s
  double mass = 0.0;               // kg
  double scattering_length = 0.0;  // m
  double L3 = 0.0;                 // m^6/s

  /// Geometric mean (omega_r^2 omega_z)^(1/3).
  double omega_bar() const;
  /// Contact coupling 4 pi hbar^2 a / m.
  double g_int() const;
  /// hbar * omega_bar, the natural energy unit.
  double energy_unit() const;
  /// Harmonic oscillator length sqrt(hbar / (m omega_bar)).
  double length_unit() const;
  /// Trapping potential at a Cartesian point (m).
  double potential(double x, double y, double z) const;

  /// Throws std::invalid_argument unless every field is strictly positive and finite.
  void validate() const;

  /// 87Rb in the 2pi x (110, 110, 14) Hz trap.
  static TrapSpecies rb87_reference();

  bool operator==(const TrapSpecies&) const = default;
};

}  // namespace qkt
