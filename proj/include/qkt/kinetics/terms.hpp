#pragma once

#include <vector>

#include "qkt/kinetics/kinetic_view.hpp"
#include "qkt/kinetics/pump.hpp"
#include "qkt/physics/state.hpp"
#include "qkt/physics/trap_species.hpp"

namespace qkt {

/// Output of a single process. rate[i] is d(rho g)/dt at node i with rho per hbar*omega_bar,
/// so sum_i w_i rate_i (w in hbar*omega_bar) is atoms/s. Products landing above the
/// truncation window are counted in `evaporated` (atoms/s) instead of a node.
struct NodeRates {
  std::vector<double> rate;
  double evaporated = 0.0;
  double dN0_dt = 0.0;
};

NodeRates thermal_thermal_term(const KineticView& v, const TrapSpecies& ts);
NodeRates thermal_thermal_term(const SystemState& state, const TrapSpecies& ts);

NodeRates thermal_condensate_term(const KineticView& v, const TrapSpecies& ts);
NodeRates thermal_condensate_term(const SystemState& state, const TrapSpecies& ts);

/// Condensate atoms in the region where U_eff - mu <= U_minus (both in J).
double condensate_region_integral(double U_minus, double mu, const TrapSpecies& ts);

/// Same, dimensionless: U_minus and mu in hbar*omega_bar, N0 the total condensate number.
double condensate_region_fraction(double U_minus, double mu);

/// Spatial integrals of n_c^3, n_c^2 n_T, n_c n_T^2, n_T^3 in length_unit^-6.
struct DensityProducts {
  double ccc = 0.0;
  double cct = 0.0;
  double ctt = 0.0;
  double ttt = 0.0;
};
DensityProducts density_products(const KineticView& v, const TrapSpecies& ts);

/// L3 int [n_c^3 + 9 n_c^2 n_T + 18 n_c n_T^2 + 6 n_T^3] dr, atoms/s lost from the system.
double three_body_total_loss(const KineticView& v, const TrapSpecies& ts);

/// Closed-form pure-condensate three-body rate, atoms/s (negative).
double three_body_condensate_closed_form(double N0, const TrapSpecies& ts);

NodeRates three_body_term(const KineticView& v, const TrapSpecies& ts);
NodeRates three_body_term(const SystemState& state, const TrapSpecies& ts);

/// Source flux into the window. evaporated holds the part of Phi that lands above the
/// window (delivered and removed in the same instant).
NodeRates replenishment_term(const KineticView& v, const PumpParams& pump, const TrapSpecies& ts);
NodeRates replenishment_term(const SystemState& state, const PumpParams& pump, const TrapSpecies& ts);

/// Conservative advection -d(rho_w g)/d eps_bar. dmu_dt in J/s. The flux leaving the top
/// of the window is booked as evaporation.
NodeRates redistribution_term(const KineticView& v, double dmu_dt, const TrapSpecies& ts);
NodeRates redistribution_term(const SystemState& state, double dmu_dt, const TrapSpecies& ts);

/// Flux through the cell faces used by redistribution_term: face[i] sits between nodes
/// i-1 and i (face[0] = 0, face[top+1] = outflow). Units atoms/s.
std::vector<double> redistribution_face_flux(const KineticView& v, double dmu_dt, const TrapSpecies& ts);

/// -gamma_out N0.
double outcoupling_term(double N0, double gamma_out);

/// Copy of state with g zeroed above eps_cut - mu. Returns the number of atoms removed
/// through `removed` when non-null.
SystemState evaporation_enforcement(const SystemState& state, double* removed = nullptr);

}  // namespace qkt
