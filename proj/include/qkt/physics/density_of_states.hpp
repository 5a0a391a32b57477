#pragma once

#include "qkt/physics/trap_species.hpp"

namespace qkt {

struct Point3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

/// Bare harmonic density of states eps^2 / (2 (hbar w)^3), 1/J.
double harmonic_dos(double eps, const TrapSpecies& ts);

/// Self-consistent density of states in the shifted coordinate eps_bar = eps - mu,
/// for thermal atoms moving in V_trap + 2 g n_c with a Thomas-Fermi condensate. 1/J.
/// Throws std::domain_error for negative arguments.
double shifted_dos(double eps_bar, double mu, const TrapSpecies& ts);

/// Level-flux density rho_w = (2 / pi hbar w) [I_- - I_+] dmu/dt, units 1/J * J/s / J = 1/s.
double weighted_dos(double eps_bar, double mu, double dmu_dt, const TrapSpecies& ts);

/// Hartree-Fock potential felt by thermal atoms. Inside the Thomas-Fermi ellipsoid
/// V_trap + 2 (mu - V_trap) = 2 mu - V_trap, so its minimum (= mu) sits on the condensate
/// surface; outside it is the bare trap.
double effective_potential(const Point3& r, double mu, const TrapSpecies& ts);

/// Local density of states m^(3/2) / (sqrt2 pi^2 hbar^3) sqrt(eps - V_eff(r)), 1/(J m^3).
/// eps is the absolute (unshifted) energy.
double local_dos(double eps, const Point3& r, double mu, const TrapSpecies& ts);

/// Dimensionless machinery. Energies in units of hbar*omega_bar, lengths in the oscillator
/// length; the isotropic coordinate s has V_trap = s^2 / 2.
namespace scaled {

/// The two shell integrals I_- (inside the condensate) and I_+ (outside).
struct DosIntegrals {
  double inside = 0.0;
  double outside = 0.0;
};

DosIntegrals dos_integrals(double eps_bar, double mu);

/// (2/pi)(I_- + I_+), density of states per hbar*omega_bar.
double shifted_dos(double eps_bar, double mu);

/// (2/pi)(I_- - I_+): weighted density of states per unit dmu/dt.
double weighted_dos_unit(double eps_bar, double mu);

/// sqrt(max(0, eps_bar - U_bar)) / (sqrt2 pi^2), per hbar*omega_bar per length_unit^3.
double local_dos(double eps_bar, double U_bar);

/// Shifted effective potential |mu - s^2/2| at isotropic radius s.
inline double shifted_potential(double s, double mu) {
  const double v = mu - 0.5 * s * s;
  return v < 0.0 ? -v : v;
}

}  // namespace scaled

}  // namespace qkt
