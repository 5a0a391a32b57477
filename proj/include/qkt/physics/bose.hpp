#pragma once

#include "qkt/physics/trap_species.hpp"

namespace qkt {

/// 1 / (exp((eps - mu_src)/k_B T) - 1). Requires eps > mu_src and T > 0.
double bose_einstein_occupation(double eps, double T, double mu_src);

/// Same occupation written with the fugacity z = exp(mu_src / k_B T), 0 < z <= 1.
/// beta_eps is eps / k_B T.
double bose_occupation_fugacity(double beta_eps, double z);

/// Polylogarithm Li_3(z) for 0 <= z <= 1.
double polylog3(double z);

/// Ideal-gas harmonic-trap number (k_B T / hbar w)^3 Li_3(z).
double harmonic_bose_number(double T, double z, const TrapSpecies& ts);

/// T_c = (hbar w / k_B) (N / zeta(3))^(1/3).
double critical_temperature(double N, const TrapSpecies& ts);

struct FugacitySolution {
  double z = 0.0;
  bool critical = false;  // N exceeded the ideal-gas capacity; z capped just below 1
};

/// Fugacity such that harmonic_bose_number(T, z) = N, by bisection to 1e-8 relative.
FugacitySolution solve_fugacity(double N, double T, const TrapSpecies& ts);

}  // namespace qkt
