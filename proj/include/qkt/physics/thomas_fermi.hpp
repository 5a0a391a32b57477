#pragma once

#include "qkt/physics/trap_species.hpp"

namespace qkt {

/// Harmonic-trap Thomas-Fermi relation mu = (hbar w / 2) (15 N0 a / a_ho)^(2/5).
/// Throws std::domain_error for negative N0.
double tf_chemical_potential(double N0, const TrapSpecies& ts);

/// Closed-form inverse of tf_chemical_potential.
double tf_condensate_number(double mu, const TrapSpecies& ts);

/// d mu / d N0 = (2/5) mu / N0; zero for an empty condensate.
double tf_dmu_dN0(double N0, const TrapSpecies& ts);

/// Thomas-Fermi density (m^-3) at a Cartesian point, zero outside the ellipsoid.
double tf_density(double mu, double x, double y, double z, const TrapSpecies& ts);

struct CondensateState {
  double N0 = 0.0;
  double mu = 0.0;  // J

  static CondensateState from_number(double N0, const TrapSpecies& ts) {
    return CondensateState{N0, tf_chemical_potential(N0, ts)};
  }
};

}  // namespace qkt
