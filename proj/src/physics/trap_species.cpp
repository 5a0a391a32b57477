#include "qkt/physics/trap_species.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "qkt/physics/constants.hpp"

namespace qkt {

double TrapSpecies::omega_bar() const { return std::cbrt(omega_r * omega_r * omega_z); }

double TrapSpecies::g_int() const {
  return 4.0 * constants::pi * constants::hbar * constants::hbar * scattering_length / mass;
}

double TrapSpecies::energy_unit() const { return constants::hbar * omega_bar(); }

double TrapSpecies::length_unit() const { return std::sqrt(constants::hbar / (mass * omega_bar())); }

double TrapSpecies::potential(double x, double y, double z) const {
  return 0.5 * mass * (omega_r * omega_r * (x * x + y * y) + omega_z * omega_z * z * z);
}

void TrapSpecies::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("TrapSpecies.") + name + " must be positive and finite");
    }
  };
  check(omega_r, "omega_r");
  check(omega_z, "omega_z");
  check(mass, "mass");
  check(scattering_length, "scattering_length");
  check(L3, "L3");
}

TrapSpecies TrapSpecies::rb87_reference() {
  const double two_pi = 2.0 * constants::pi;
  return TrapSpecies{two_pi * 110.0, two_pi * 14.0, constants::rb87_mass,
                     constants::rb87_scattering_length, constants::rb87_L3};
}

}  // namespace qkt
