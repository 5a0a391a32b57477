#include "qkt/physics/bose.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>
#include <stdexcept>

#include "qkt/physics/constants.hpp"

namespace qkt {

double bose_einstein_occupation(double eps, double T, double mu_src) {
  if (!(T > 0.0)) throw std::domain_error("bose_einstein_occupation: T must be positive");
  if (!(eps > mu_src)) throw std::domain_error("bose_einstein_occupation: need eps > mu_src");
  return 1.0 / std::expm1((eps - mu_src) / (constants::k_B * T));
}

double bose_occupation_fugacity(double beta_eps, double z) {
  if (z <= 0.0) return 0.0;
  // z e^{-x} / (1 - z e^{-x}); the expm1 form keeps accuracy as z -> 1, x -> 0.
  const double exponent = beta_eps - std::log(z);
  if (exponent <= 0.0) throw std::domain_error("bose_occupation_fugacity: occupation diverges");
  return 1.0 / std::expm1(exponent);
}

double polylog3(double z) {
  if (z < 0.0 || z > 1.0) throw std::domain_error("polylog3: z must lie in [0, 1]");
  if (z == 0.0) return 0.0;
  if (z <= 0.75) {
    double sum = 0.0, zk = z;
    for (int k = 1; k < 400; ++k) {
      const double term = zk / (static_cast<double>(k) * k * k);
      sum += term;
      if (term < 1e-18 * sum) break;
      zk *= z;
    }
    return sum;
  }
  // Expansion about z = 1 in m = ln z, |m| < 2 pi:
  // Li3(e^m) = zeta(3) + zeta(2) m + (3/2 - ln(-m)) m^2 / 2 + sum_{k>=3} zeta(3-k) m^k / k!
  const double m = std::log(z);
  double sum = constants::zeta3 + constants::zeta2 * m;
  if (m < 0.0) sum += (1.5 - std::log(-m)) * m * m / 2.0;
  double power = m * m;
  double factorial = 2.0;
  for (int k = 3; k < 40; ++k) {
    power *= m;
    factorial *= k;
    const double term = boost::math::zeta(static_cast<double>(3 - k)) * power / factorial;
    sum += term;
    if (std::abs(term) < 1e-18 * std::abs(sum) && k > 6) break;
  }
  return sum;
}

double harmonic_bose_number(double T, double z, const TrapSpecies& ts) {
  const double ratio = constants::k_B * T / ts.energy_unit();
  return ratio * ratio * ratio * polylog3(z);
}

double critical_temperature(double N, const TrapSpecies& ts) {
  if (!(N > 0.0)) throw std::domain_error("critical_temperature: N must be positive");
  return ts.energy_unit() / constants::k_B * std::cbrt(N / constants::zeta3);
}

FugacitySolution solve_fugacity(double N, double T, const TrapSpecies& ts) {
  if (!(N > 0.0) || !(T > 0.0)) throw std::domain_error("solve_fugacity: N and T must be positive");
  constexpr double z_max = 1.0 - 1e-12;
  if (harmonic_bose_number(T, z_max, ts) <= N) return {z_max, true};
  double lo = 0.0, hi = z_max;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double n_mid = harmonic_bose_number(T, mid, ts);
    if (n_mid < N) lo = mid; else hi = mid;
    if (std::abs(n_mid - N) < 1e-10 * N) break;
  }
  return {0.5 * (lo + hi), false};
}

}  // namespace qkt
