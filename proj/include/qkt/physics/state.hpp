#pragma once

#include <memory>
#include <vector>

#include "qkt/physics/density_of_states.hpp"
#include "qkt/physics/energy_grid.hpp"
#include "qkt/physics/thomas_fermi.hpp"
#include "qkt/physics/trap_species.hpp"

namespace qkt {

/// Thermal cloud on the shifted energy grid. rho_bar caches the self-consistent density
/// of states (1/J) for the chemical potential the state was built with.
struct ThermalState {
  std::shared_ptr<const EnergyGrid> grid;
  std::vector<double> g;
  std::vector<double> rho_bar;

  /// N_T = sum_i w_i rho_bar_i g_i
  double number() const;
};

struct SystemState {
  double t = 0.0;
  CondensateState condensate;
  ThermalState thermal;

  double thermal_number() const { return thermal.number(); }
  double total_number() const { return condensate.N0 + thermal.number(); }
  double condensate_fraction() const;

  /// Build from occupations g_i; mu and rho_bar are derived from N0.
  static SystemState from_occupation(double t, double N0, std::shared_ptr<const EnergyGrid> grid,
                                     std::vector<double> g, const TrapSpecies& ts);
  /// Build from level populations rho_bar_i g_i (1/J). Nodes with zero density of
  /// states (eps_bar = 0) get g = 0.
  static SystemState from_populations(double t, double N0, std::shared_ptr<const EnergyGrid> grid,
                                      const std::vector<double>& rho_g, const TrapSpecies& ts);
};

std::vector<double> shifted_dos_on_grid(const EnergyGrid& grid, double mu, const TrapSpecies& ts);

/// Index of the highest node inside the truncation window eps_bar <= eps_cut - mu.
long active_top_index(const EnergyGrid& grid, double mu);

/// n_T(r) = int d eps rho(eps, r) g(eps) with the grid quadrature, m^-3.
double thermal_density(const Point3& r, const ThermalState& thermal, double mu, const TrapSpecies& ts);

}  // namespace qkt
