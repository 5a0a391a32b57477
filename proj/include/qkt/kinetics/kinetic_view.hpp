#pragma once

#include <vector>

#include "qkt/physics/state.hpp"
#include "qkt/physics/trap_species.hpp"

namespace qkt {

/// Dimensionless snapshot of a SystemState used by the rate kernels: energies in
/// hbar*omega_bar, densities of states per hbar*omega_bar. Occupations above the
/// truncation window are zeroed, node 0 (zero density of states) is inert.
struct KineticView {
  double energy_unit = 0.0;  // J
  double mu = 0.0;
  double N0 = 0.0;
  double spacing = 0.0;
  long top = -1;  // highest active node
  std::vector<double> eps;
  std::vector<double> w;
  std::vector<double> rho;
  std::vector<double> g;

  std::size_t size() const { return eps.size(); }
  /// Quadrature weight, extended with the bare spacing past the end of the grid.
  double weight_ext(long i) const {
    return i < static_cast<long>(w.size()) ? w[static_cast<std::size_t>(i)] : spacing;
  }
};

KineticView make_view(const SystemState& state, const TrapSpecies& ts);

/// m^3 g^2 (hbar w)^2 / (2 pi^3 hbar^7) = 8 m a^2 w^2 / (pi hbar): the collision rate
/// constant once energies are measured in hbar*omega_bar. 1/s.
double collision_rate_constant(const TrapSpecies& ts);

}  // namespace qkt
