#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qkt/integrator/integrator.hpp"
#include "qkt/kinetics/pump.hpp"
#include "qkt/physics/trap_species.hpp"

namespace qkt {

/// kappa = Phi (hbar w / k_B T)^3, 1/s.
double compute_kappa(double Phi, double T, const TrapSpecies& ts);
/// N (hbar w / k_B T)^3, the peak phase-space density of an (N, T) pulse.
double phase_space_density(double N, double T, const TrapSpecies& ts);

/// Everything needed for one steady-state solve.
struct Scenario {
  TrapSpecies trap = TrapSpecies::rb87_reference();
  double Phi = 8.4e5;      // atoms/s
  double T = 540e-9;       // K
  double gamma = 0.3;      // 1/s
  double eps_cut_J = 0.0;  // absolute cut, used when > 0
  double eps_cut_kT = 3.0; // cut in units of k_B T, used when eps_cut_J == 0
  double N_initial = 4.2e6;
  double N_source = 0.0;   // atoms held by the source gas; 0 means N_initial
  double N0_seed = 1e3;
  double N0_floor = 1e3;   // see IntegratorConfig::condensate_floor
  std::size_t grid_nodes = 400;
  double t_max = 60.0;     // s
  IntegratorConfig integrator;

  double eps_cut() const;
  PumpParams pump() const;
  /// Throws std::invalid_argument when inconsistent.
  void validate() const;
  bool operator==(const Scenario&) const = default;
};

struct SteadyPoint {
  // inputs
  double Phi = 0.0, T = 0.0, eps_cut = 0.0, gamma = 0.0, kappa = 0.0, eps_cut_over_kT = 0.0;
  // outputs
  double N0 = 0.0, N_T = 0.0, fraction = 0.0, mu = 0.0;
  double time_to_steady = 0.0;            // s
  double effective_flux_below_cut = 0.0;  // atoms/s entering the window
  bool steady = false;
  bool failed = false;
  bool warm_started = false;
  std::string message;
};

struct SteadyRun {
  SteadyPoint point;
  EvolveResult evolution;
};

/// Cold start from the truncated Bose-Einstein cloud, or from `warm` (regridded onto the
/// scenario's grid) when given. A failed warm start falls back to a cold start.
SteadyRun solve_steady(const Scenario& sc, const SystemState* warm = nullptr);

enum class SweepVariable { Phi, T, eps_cut, gamma };
std::string to_string(SweepVariable v);
std::optional<SweepVariable> sweep_variable_from_string(const std::string& s);

struct SweepSpec {
  SweepVariable varying = SweepVariable::gamma;
  std::vector<double> values;  // SI; eps_cut values are multiples of k_B T when cut_in_kT
  Scenario base;
  bool three_body = true;
  bool cut_in_kT = true;
  bool warm_start = true;
};

struct SweepResult {
  std::vector<SteadyPoint> points;
  bool non_decreasing = false;  // N0 along increasing input, within `noise`
  bool non_increasing = false;
  double noise = 0.01;
};

/// Monotonicity of N0 with respect to the listed input values, tolerating relative
/// decreases (or increases) up to noise.
void classify_monotonic(SweepResult& r, const std::vector<double>& inputs);

/// Points are solved in ascending order of the varied value (so warm starts move in one
/// direction) and returned in the order of spec.values.
SweepResult sweep(const SweepSpec& spec);

struct MaximizeResult {
  double x = 0.0;
  double f = 0.0;
  bool interior_max = false;
  std::vector<std::pair<double, double>> evaluations;
};

/// Derivative-free maximization on [lo, hi]: a pre-scan of `prescan` log-spaced points
/// followed by golden-section refinement around the best one until the bracket width is
/// below rel_tol times the abscissa. Deterministic.
MaximizeResult maximize_prescan_golden(const std::function<double(double)>& f, double lo, double hi,
                                       int prescan = 12, double rel_tol = 1e-2);

struct CutOptimum {
  double eps_cut = 0.0;  // J
  double N0 = 0.0;
  bool interior_max = false;
  SteadyPoint best;
  std::vector<SteadyPoint> evaluations;
};

struct OptimizeOptions {
  int prescan = 12;
  double rel_tol = 1e-2;
  bool warm_start = false;  // warm-start golden steps from the nearest evaluated cut
};

/// Maximizes steady N0 over eps_cut in [bracket.first, bracket.second] (J).
CutOptimum optimize_eps_cut(const Scenario& base, std::pair<double, double> bracket,
                            const OptimizeOptions& opt = {});

enum class KappaGroup { high_T, marginal, low_T };
std::string to_string(KappaGroup g);

struct GroupThresholds {
  double high = 0.1;  // eps_cut*/(k_B T) below this: high-T group
  double low = 0.5;   // at or above this: low-T group
};
KappaGroup classify_group(double eps_cut_over_kT, const GroupThresholds& th = {});

struct ScanPoint {
  SteadyPoint point;
  KappaGroup group = KappaGroup::marginal;
  bool interior_max = false;
  std::vector<SteadyPoint> evaluations;
};

struct KappaScanSpec {
  std::pair<double, double> Phi_range{1.3e5, 5e10};
  std::pair<double, double> T_range{200e-9, 600e-6};
  std::size_t Phi_count = 2;
  std::size_t T_count = 2;
  /// explicit (Phi, T) pairs; used instead of the log grid when non-empty
  std::vector<std::pair<double, double>> pairs;
  std::pair<double, double> cut_bracket_kT{0.01, 4.0};
  Scenario base;
  OptimizeOptions optimize;
  GroupThresholds thresholds;
  std::size_t workers = 1;
};

/// Log-spaced (Phi, T) grid, or the explicit pairs, each optimized over the cut.
std::vector<ScanPoint> kappa_scan(const KappaScanSpec& spec);

/// Runs fn(i) for i in [0, n) on up to `workers` threads; results keep index order.
template <class R>
std::vector<R> parallel_map(std::size_t n, std::size_t workers, const std::function<R(std::size_t)>& fn);

struct SourceEntry {
  std::string name;
  double Phi = 0.0;  // atoms/s
  double T = 0.0;    // K
  bool comparison_only = false;  // pulsed/pre-condensed source listed for reference
};

struct SourceVerdict {
  SourceEntry source;
  double kappa = 0.0;
  bool above_threshold = false;  // kappa >= threshold
  bool passes = false;           // above threshold and a continuous source
};

std::vector<SourceVerdict> evaluate_sources(const std::vector<SourceEntry>& catalog, const TrapSpecies& ts,
                                            double threshold = 1e-3);

}  // namespace qkt

#include "qkt/experiments/parallel_map.ipp"
