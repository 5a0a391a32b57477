#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "qkt/kinetics/pump.hpp"
#include "qkt/kinetics/rhs.hpp"
#include "qkt/physics/state.hpp"
#include "qkt/physics/trap_species.hpp"

namespace qkt {

struct IntegratorConfig {
  double rtol = 1e-6;
  double atol_N0 = 1.0;       // atoms
  double atol_g = 1e-6;       // occupation
  double dt_init = 1e-4;      // s
  double dt_max = 0.05;       // s
  double dt_min = 1e-12;      // s, below this the solve is declared stiff
  double steady_window = 0.1; // s
  double steady_frac = 1e-3;
  double steady_abs = 1.0;    // atoms
  /// Over the same window the total number may drift by at most this fraction of the
  /// atoms delivered by the source, so a slowly filling cloud is not taken as steady.
  double steady_balance = 1e-2;
  double sample_interval = 0.01;    // s between trajectory samples
  std::vector<double> snapshot_times; // s, full g snapshots
  std::size_t max_steps = 5'000'000;
  /// Smallest condensate kept after each step (atoms). Growth is proportional to N0, so
  /// a condensate that empties out could never re-form; the floor keeps a nucleus.
  double condensate_floor = 0.0;
  ProcessToggles toggles;

  /// Throws std::invalid_argument when a field is non-positive.
  void validate() const;
  bool operator==(const IntegratorConfig&) const = default;
};

/// Butcher tableau of an embedded explicit pair. b is the propagated (higher-order)
/// solution, b_err the embedded one.
struct ButcherTableau {
  int stages = 0;
  int order = 0;  // order of b
  std::vector<double> c;
  std::vector<std::vector<double>> a;
  std::vector<double> b;
  std::vector<double> b_err;
  bool fsal = false;

  static ButcherTableau dormand_prince();
  static ButcherTableau cash_karp();
};

struct TrajectorySample {
  double t = 0.0;
  double N0 = 0.0;
  double N_T = 0.0;
  double mu = 0.0;  // J
  double fraction = 0.0;
};

struct Snapshot {
  double t = 0.0;
  double mu = 0.0;
  std::vector<double> eps_bar;  // J
  std::vector<double> rho_bar;  // 1/J
  std::vector<double> g;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;
  std::vector<Snapshot> snapshots;
};

/// Atom-number bookkeeping integrated over accepted steps (atoms).
struct NumberLedger {
  double source_total = 0.0;       // integral of Phi
  double source_above_cut = 0.0;   // part of the source never entering the window
  double replenished = 0.0;        // delivered into the window
  double evaporated = 0.0;         // collision/redistribution products above the cut, truncation, clamping
  double three_body = 0.0;         // atoms lost (positive number)
  double outcoupled = 0.0;         // atoms extracted into the laser (positive number)
  double condensed = 0.0;          // net thermal -> condensate transfer by collisions
  double seeded = 0.0;             // atoms added to hold the condensate at its floor
  /// Predicted change of the total number
  double net() const { return replenished - evaporated - three_body - outcoupled + seeded; }
};

class StiffnessFailure : public std::runtime_error {
 public:
  StiffnessFailure(const std::string& what, SystemState state)
      : std::runtime_error(what), state_(std::move(state)) {}
  const SystemState& state() const { return state_; }

 private:
  SystemState state_;
};

struct StepResult {
  SystemState state;
  double dt_used = 0.0;
  double error = 0.0;   // error norm of the accepted step
  double dt_next = 0.0; // proposal for the following step
  int rejected = 0;
  NumberLedger ledger;
};

/// One accepted adaptive step starting from the trial size dt. After acceptance mu is
/// recomputed from N0, the window is re-truncated and negative populations clamped.
/// Throws StiffnessFailure when the step size underflows cfg.dt_min.
StepResult step(const SystemState& state, const PumpParams& pump, const TrapSpecies& ts,
                const IntegratorConfig& cfg, double dt,
                const ButcherTableau& tableau = ButcherTableau::dormand_prince());

struct EvolveResult {
  Trajectory trajectory;
  SystemState final_state;
  bool steady = false;
  bool failed = false;
  std::string failure;
  double time_to_steady = 0.0;  // s, valid when steady
  std::size_t steps = 0;
  std::size_t rejected = 0;
  NumberLedger ledger;
  ProcessRates final_rates;
};

/// Integrates to steady state or t_max. Stiffness failures are reported through
/// EvolveResult::failed with the partial trajectory.
EvolveResult evolve(const SystemState& initial, const PumpParams& pump, const TrapSpecies& ts,
                    const IntegratorConfig& cfg, double t_max,
                    const ButcherTableau& tableau = ButcherTableau::dormand_prince());

struct InitialState {
  SystemState state;
  double fugacity = 0.0;
  bool critical = false;  // N_initial exceeded the ideal-gas capacity at T
};

/// Truncated Bose-Einstein cloud at temperature T whose untruncated number is N_initial,
/// next to a condensate of N0_seed atoms (zero gives a cloud that can never condense).
InitialState make_initial_state(double N_initial, double T, std::shared_ptr<const EnergyGrid> grid,
                                const TrapSpecies& ts, double N0_seed = 0.0);

/// Resample a state onto another grid, interpolating g in eps_bar (log-linear where both
/// neighbours are occupied). Used for warm starts across different cuts.
SystemState regrid(const SystemState& state, std::shared_ptr<const EnergyGrid> grid, const TrapSpecies& ts);

}  // namespace qkt
