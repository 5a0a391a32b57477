#include "qkt/physics/thomas_fermi.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkt {

double tf_chemical_potential(double N0, const TrapSpecies& ts) {
  if (N0 < 0.0 || std::isnan(N0)) throw std::domain_error("tf_chemical_potential: N0 must be >= 0");
  if (N0 == 0.0) return 0.0;
  const double ratio = 15.0 * N0 * ts.scattering_length / ts.length_unit();
  return 0.5 * ts.energy_unit() * std::pow(ratio, 0.4);
}

double tf_condensate_number(double mu, const TrapSpecies& ts) {
  if (mu < 0.0 || std::isnan(mu)) throw std::domain_error("tf_condensate_number: mu must be >= 0");
  const double x = 2.0 * mu / ts.energy_unit();
  return ts.length_unit() / (15.0 * ts.scattering_length) * x * x * std::sqrt(x);
}

double tf_dmu_dN0(double N0, const TrapSpecies& ts) {
  if (N0 <= 0.0) return 0.0;
  return 0.4 * tf_chemical_potential(N0, ts) / N0;
}

double tf_density(double mu, double x, double y, double z, const TrapSpecies& ts) {
  return std::max(0.0, mu - ts.potential(x, y, z)) / ts.g_int();
}

}  // namespace qkt
