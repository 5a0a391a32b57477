#include "qkt/physics/state.hpp"

#include <cmath>
#include <stdexcept>

namespace qkt {

double ThermalState::number() const {
  if (!grid) return 0.0;
  const auto& w = grid->weights();
  double n = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) n += w[i] * rho_bar[i] * g[i];
  return n;
}

double SystemState::condensate_fraction() const {
  const double total = total_number();
  return total > 0.0 ? condensate.N0 / total : 0.0;
}

std::vector<double> shifted_dos_on_grid(const EnergyGrid& grid, double mu, const TrapSpecies& ts) {
  std::vector<double> rho(grid.size());
  const double E = ts.energy_unit();
  const double mu_s = mu / E;
  for (std::size_t i = 0; i < grid.size(); ++i) rho[i] = scaled::shifted_dos(grid.node(i) / E, mu_s) / E;
  return rho;
}

long active_top_index(const EnergyGrid& grid, double mu) {
  return grid.last_index_below(grid.eps_cut() - mu);
}

SystemState SystemState::from_occupation(double t, double N0, std::shared_ptr<const EnergyGrid> grid,
                                         std::vector<double> g, const TrapSpecies& ts) {
  if (!grid || g.size() != grid->size()) throw std::invalid_argument("from_occupation: size mismatch");
  SystemState s;
  s.t = t;
  s.condensate = CondensateState::from_number(N0, ts);
  s.thermal.rho_bar = shifted_dos_on_grid(*grid, s.condensate.mu, ts);
  s.thermal.grid = std::move(grid);
  s.thermal.g = std::move(g);
  return s;
}

SystemState SystemState::from_populations(double t, double N0, std::shared_ptr<const EnergyGrid> grid,
                                          const std::vector<double>& rho_g, const TrapSpecies& ts) {
  if (!grid || rho_g.size() != grid->size()) throw std::invalid_argument("from_populations: size mismatch");
  SystemState s;
  s.t = t;
  s.condensate = CondensateState::from_number(N0, ts);
  s.thermal.rho_bar = shifted_dos_on_grid(*grid, s.condensate.mu, ts);
  s.thermal.g.assign(grid->size(), 0.0);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    if (s.thermal.rho_bar[i] > 0.0) s.thermal.g[i] = rho_g[i] / s.thermal.rho_bar[i];
  }
  s.thermal.grid = std::move(grid);
  return s;
}

double thermal_density(const Point3& r, const ThermalState& thermal, double mu, const TrapSpecies& ts) {
  const auto& grid = *thermal.grid;
  double n = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (thermal.g[i] == 0.0) continue;
    n += grid.weight(i) * local_dos(grid.node(i) + mu, r, mu, ts) * thermal.g[i];
  }
  return n;
}

}  // namespace qkt
