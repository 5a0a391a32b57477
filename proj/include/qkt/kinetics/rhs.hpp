#pragma once

#include <optional>
#include <vector>

#include "qkt/kinetics/kinetic_view.hpp"
#include "qkt/kinetics/pump.hpp"
#include "qkt/kinetics/terms.hpp"
#include "qkt/physics/state.hpp"
#include "qkt/physics/trap_species.hpp"

namespace qkt {

struct ProcessToggles {
  bool thermal_thermal = true;
  bool thermal_condensate = true;
  bool three_body = true;
  bool replenishment = true;
  bool redistribution = true;
  bool outcoupling = true;

  static ProcessToggles none() { return {false, false, false, false, false, false}; }
  bool operator==(const ProcessToggles&) const = default;
};

/// Time derivative of the state split by process. Per-node vectors hold d(rho g)/dt with
/// rho per hbar*omega_bar (atoms / (hbar*omega_bar s)); divide by the energy unit for SI.
struct ProcessRates {
  struct CondensateRates {
    double thermal_condensate = 0.0;
    double three_body = 0.0;
    double outcoupling = 0.0;
    double total() const { return thermal_condensate + three_body + outcoupling; }
  };
  struct NodeRateSet {
    std::vector<double> thermal_thermal;
    std::vector<double> thermal_condensate;
    std::vector<double> three_body;
    std::vector<double> replenishment;
    std::vector<double> redistribution;
  };
  /// Atoms/s leaving the window at the evaporation cut, per process
  struct EvaporationRates {
    double thermal_thermal = 0.0;
    double thermal_condensate = 0.0;
    double replenishment = 0.0;  // source flux that lands above the cut
    double redistribution = 0.0;
    double total() const { return thermal_thermal + thermal_condensate + replenishment + redistribution; }
  };

  CondensateRates dN0_dt;
  NodeRateSet d_rho_g_dt;
  EvaporationRates evaporated;
  double three_body_thermal_loss = 0.0;  // atoms/s, <= 0
  double replenishment_delivered = 0.0;  // atoms/s into the window
  double dmu_dt = 0.0;                   // J/s used by the redistribution term
  bool cut_near_condensate = false;      // eps_cut < 5 mu

  /// Sum of the per-node contributions.
  std::vector<double> total_node_rate() const;
};

/// Sum of the enabled process terms. Without an explicit dmu_dt the redistribution term
/// uses the instantaneous Thomas-Fermi value (dmu/dN0) * dN0/dt.
ProcessRates assemble_rhs(const SystemState& state, const PumpParams& pump, const TrapSpecies& ts,
                          const ProcessToggles& toggles = {},
                          std::optional<double> dmu_dt = std::nullopt);
ProcessRates assemble_rhs(const KineticView& v, const PumpParams& pump, const TrapSpecies& ts,
                          const ProcessToggles& toggles = {},
                          std::optional<double> dmu_dt = std::nullopt);

}  // namespace qkt
