#pragma once

#include "qkt/physics/trap_species.hpp"

namespace qkt {

/// Replenishment source, outcoupler and evaporation cut. Gamma is fixed by
/// Gamma * int rho_0 g_T d eps = Phi for the source's Bose-Einstein distribution.
struct PumpParams {
  double Phi = 0.0;              // atoms/s delivered before evaporation
  double T_source = 0.0;         // K
  double source_fugacity = 0.0;  // z of g_T
  double Gamma = 0.0;            // 1/s
  double gamma_out = 0.0;        // 1/s
  double eps_cut = 0.0;          // J

  /// Source modeled as a trapped ideal gas holding N_source atoms at T_source
  /// (fugacity capped below 1 when N_source exceeds the ideal-gas capacity).
  static PumpParams from_source(double Phi, double T_source, double N_source, double gamma_out,
                                double eps_cut, const TrapSpecies& ts);

  /// Gamma * zeta, which reduces to Phi (hbar w / k_B T)^3 in the Boltzmann limit.
  double kappa() const { return Gamma * source_fugacity; }

  /// Throws std::invalid_argument on non-physical values.
  void validate() const;
};

}  // namespace qkt
