#include "qkt/kinetics/kinetic_view.hpp"

#include "qkt/physics/constants.hpp"

namespace qkt {

KineticView make_view(const SystemState& state, const TrapSpecies& ts) {
  const auto& grid = *state.thermal.grid;
  const double E = ts.energy_unit();
  KineticView v;
  v.energy_unit = E;
  v.mu = state.condensate.mu / E;
  v.N0 = state.condensate.N0;
  v.spacing = grid.spacing() / E;
  v.top = active_top_index(grid, state.condensate.mu);
  const std::size_t n = grid.size();
  v.eps.resize(n);
  v.w.resize(n);
  v.rho.resize(n);
  v.g.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    v.eps[i] = grid.node(i) / E;
    v.w[i] = grid.weight(i) / E;
    v.rho[i] = state.thermal.rho_bar[i] * E;
    if (static_cast<long>(i) <= v.top && i > 0) v.g[i] = state.thermal.g[i];
  }
  return v;
}

double collision_rate_constant(const TrapSpecies& ts) {
  const double a = ts.scattering_length;
  const double w = ts.omega_bar();
  return 8.0 * ts.mass * a * a * w * w / (constants::pi * constants::hbar);
}

}  // namespace qkt
