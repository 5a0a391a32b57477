#include <algorithm>
#include <cmath>

#include "qkt/kinetics/terms.hpp"
#include "qkt/physics/bose.hpp"
#include "qkt/physics/constants.hpp"

namespace qkt {

NodeRates replenishment_term(const KineticView& v, const PumpParams& pump, const TrapSpecies& /*ts*/) {
  NodeRates out;
  out.rate.assign(v.size(), 0.0);
  if (!(pump.Phi > 0.0) || !(pump.Gamma > 0.0)) return out;
  const double beta = v.energy_unit / (constants::k_B * pump.T_source);
  double delivered = 0.0;
  for (long i = 1; i <= v.top; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double e = v.eps[ui];
    out.rate[ui] = pump.Gamma * 0.5 * e * e * bose_occupation_fugacity(beta * e, pump.source_fugacity);
    delivered += v.w[ui] * out.rate[ui];
  }
  out.evaporated = pump.Phi - delivered;
  return out;
}

NodeRates replenishment_term(const SystemState& state, const PumpParams& pump, const TrapSpecies& ts) {
  return replenishment_term(make_view(state, ts), pump, ts);
}

std::vector<double> redistribution_face_flux(const KineticView& v, double dmu_dt, const TrapSpecies& ts) {
  (void)ts;
  std::vector<double> face(static_cast<std::size_t>(std::max<long>(v.top + 2, 1)), 0.0);
  if (v.top < 1 || dmu_dt == 0.0) return face;
  const double mudot = dmu_dt / v.energy_unit;
  std::vector<double> J(static_cast<std::size_t>(v.top + 1), 0.0);
  for (long i = 1; i <= v.top; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    J[ui] = scaled::weighted_dos_unit(v.eps[ui], v.mu) * mudot * v.g[ui];
  }
  // Node 0 carries no states; node 1 is the closed lower boundary.
  for (long i = 2; i <= v.top; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    face[ui] = 0.5 * (J[ui - 1] + J[ui]);
  }
  face[static_cast<std::size_t>(v.top + 1)] = std::max(J[static_cast<std::size_t>(v.top)], 0.0);
  return face;
}

NodeRates redistribution_term(const KineticView& v, double dmu_dt, const TrapSpecies& ts) {
  NodeRates out;
  out.rate.assign(v.size(), 0.0);
  if (v.top < 1 || dmu_dt == 0.0) return out;
  const auto face = redistribution_face_flux(v, dmu_dt, ts);
  for (long i = 1; i <= v.top; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out.rate[ui] = -(face[ui + 1] - face[ui]) / v.w[ui];
  }
  out.evaporated = face[static_cast<std::size_t>(v.top + 1)];
  return out;
}

NodeRates redistribution_term(const SystemState& state, double dmu_dt, const TrapSpecies& ts) {
  return redistribution_term(make_view(state, ts), dmu_dt, ts);
}

double outcoupling_term(double N0, double gamma_out) { return -gamma_out * N0; }

SystemState evaporation_enforcement(const SystemState& state, double* removed) {
  SystemState out = state;
  const auto& grid = *state.thermal.grid;
  const long top = active_top_index(grid, state.condensate.mu);
  double lost = 0.0;
  for (std::size_t i = static_cast<std::size_t>(top + 1); i < out.thermal.g.size(); ++i) {
    if (out.thermal.g[i] != 0.0) {
      lost += grid.weight(i) * out.thermal.rho_bar[i] * out.thermal.g[i];
      out.thermal.g[i] = 0.0;
    }
  }
  if (removed) *removed = lost;
  return out;
}

}  // namespace qkt
