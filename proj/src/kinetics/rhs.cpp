#include "qkt/kinetics/rhs.hpp"

#include "qkt/physics/thomas_fermi.hpp"

namespace qkt {

std::vector<double> ProcessRates::total_node_rate() const {
  const auto& d = d_rho_g_dt;
  std::vector<double> out(d.thermal_thermal.size(), 0.0);
  for (const auto* part : {&d.thermal_thermal, &d.thermal_condensate, &d.three_body,
                           &d.replenishment, &d.redistribution}) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += (*part)[i];
  }
  return out;
}

ProcessRates assemble_rhs(const KineticView& v, const PumpParams& pump, const TrapSpecies& ts,
                          const ProcessToggles& toggles, std::optional<double> dmu_dt) {
  ProcessRates r;
  const std::vector<double> zeros(v.size(), 0.0);
  auto& d = r.d_rho_g_dt;
  d.thermal_thermal = d.thermal_condensate = d.three_body = d.replenishment = d.redistribution = zeros;

  if (toggles.thermal_thermal) {
    auto tt = thermal_thermal_term(v, ts);
    d.thermal_thermal = std::move(tt.rate);
    r.evaporated.thermal_thermal = tt.evaporated;
  }
  if (toggles.thermal_condensate) {
    auto tc = thermal_condensate_term(v, ts);
    d.thermal_condensate = std::move(tc.rate);
    r.evaporated.thermal_condensate = tc.evaporated;
    r.dN0_dt.thermal_condensate = tc.dN0_dt;
  }
  if (toggles.three_body) {
    auto tb = three_body_term(v, ts);
    for (std::size_t i = 0; i < v.size(); ++i) r.three_body_thermal_loss += v.w[i] * tb.rate[i];
    d.three_body = std::move(tb.rate);
    r.dN0_dt.three_body = tb.dN0_dt;
  }
  if (toggles.replenishment) {
    auto rp = replenishment_term(v, pump, ts);
    for (std::size_t i = 0; i < v.size(); ++i) r.replenishment_delivered += v.w[i] * rp.rate[i];
    d.replenishment = std::move(rp.rate);
    r.evaporated.replenishment = rp.evaporated;
  }
  if (toggles.outcoupling) r.dN0_dt.outcoupling = outcoupling_term(v.N0, pump.gamma_out);

  const double E = v.energy_unit;
  if (dmu_dt) {
    r.dmu_dt = *dmu_dt;
  } else if (v.N0 > 0.0) {
    r.dmu_dt = 0.4 * (v.mu * E / v.N0) * r.dN0_dt.total();
  }
  if (toggles.redistribution && r.dmu_dt != 0.0) {
    auto rd = redistribution_term(v, r.dmu_dt, ts);
    d.redistribution = std::move(rd.rate);
    r.evaporated.redistribution = rd.evaporated;
  }
  r.cut_near_condensate = v.mu > 0.0 && pump.eps_cut < 5.0 * v.mu * E;
  return r;
}

ProcessRates assemble_rhs(const SystemState& state, const PumpParams& pump, const TrapSpecies& ts,
                          const ProcessToggles& toggles, std::optional<double> dmu_dt) {
  return assemble_rhs(make_view(state, ts), pump, ts, toggles, dmu_dt);
}

}  // namespace qkt
