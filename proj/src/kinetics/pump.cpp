#include "qkt/kinetics/pump.hpp"

#include <cmath>
#include <stdexcept>

#include "qkt/physics/bose.hpp"

namespace qkt {

PumpParams PumpParams::from_source(double Phi, double T_source, double N_source, double gamma_out,
                                   double eps_cut, const TrapSpecies& ts) {
  PumpParams p;
  p.Phi = Phi;
  p.T_source = T_source;
  p.gamma_out = gamma_out;
  p.eps_cut = eps_cut;
  const auto fug = solve_fugacity(N_source, T_source, ts);
  p.source_fugacity = fug.z;
  p.Gamma = Phi / harmonic_bose_number(T_source, fug.z, ts);
  p.validate();
  return p;
}

void PumpParams::validate() const {
  if (!(Phi >= 0.0) || !std::isfinite(Phi)) throw std::invalid_argument("pump: Phi must be >= 0");
  if (!(T_source > 0.0)) throw std::invalid_argument("pump: T_source must be positive");
  if (!(gamma_out >= 0.0)) throw std::invalid_argument("pump: gamma_out must be >= 0");
  if (!(eps_cut > 0.0)) throw std::invalid_argument("pump: eps_cut must be positive");
  if (!(source_fugacity > 0.0 && source_fugacity < 1.0)) {
    throw std::invalid_argument("pump: source fugacity must lie in (0, 1)");
  }
  if (!(Gamma >= 0.0) || !std::isfinite(Gamma)) throw std::invalid_argument("pump: Gamma invalid");
}

}  // namespace qkt
