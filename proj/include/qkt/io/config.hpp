#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qkt/experiments/experiments.hpp"

namespace qkt::io {

enum class RunMode { simulate, sweep, optimize_cut, kappa_scan, sources };
std::string to_string(RunMode m);
/// Accepts the subcommand spellings (optimize-cut, kappa-scan) and underscores.
bool run_mode_from_string(const std::string& s, RunMode& out);

struct SweepBlock {
  SweepVariable variable = SweepVariable::gamma;
  std::vector<double> values;  // SI, or multiples of k_B T for eps_cut when cut_in_kT
  bool cut_in_kT = true;
  bool three_body = true;
  bool warm_start = true;
  bool operator==(const SweepBlock&) const = default;
};

struct OptimizeBlock {
  std::pair<double, double> bracket{1.0, 8.0};  // multiples of k_B T, or J when bracket_in_J
  bool bracket_in_J = false;
  int prescan = 12;
  double rel_tol = 1e-2;
  bool warm_start = false;
  bool operator==(const OptimizeBlock&) const = default;
};

struct KappaScanBlock {
  std::pair<double, double> Phi_range{1.3e5, 5e10};  // atoms/s
  std::pair<double, double> T_range{200e-9, 600e-6}; // K
  std::size_t Phi_count = 4;
  std::size_t T_count = 4;
  std::vector<std::pair<double, double>> pairs;      // (Phi, T); replaces the grid when given
  std::pair<double, double> cut_bracket_kT{0.01, 4.0};
  double group_high = 0.1;
  double group_low = 0.5;
  bool operator==(const KappaScanBlock&) const = default;
};

struct SourcesBlock {
  std::string catalog;          // relative paths resolve against the working directory
  double threshold = 1e-3;      // 1/s
  bool operator==(const SourcesBlock&) const = default;
};

struct OutputBlock {
  std::string directory = "results";
  bool csv = true;
  bool json = true;
  bool operator==(const OutputBlock&) const = default;
};

/// Scenario plus the experiment and output choices. Sampling cadence and snapshot times
/// live in scenario.integrator.
struct RunConfig {
  Scenario scenario;
  RunMode mode = RunMode::simulate;
  SweepBlock sweep;
  OptimizeBlock optimize;
  KappaScanBlock kappa_scan;
  SourcesBlock sources;
  OutputBlock output;
  bool operator==(const RunConfig&) const = default;
};

/// Every problem found in a config, not just the first.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> errors);
  const std::vector<std::string>& errors() const { return errors_; }

 private:
  std::vector<std::string> errors_;
};

/// key=value with a dotted key, e.g. pump.gamma_per_s=0.6. The value is read as YAML.
struct Override {
  std::string key;
  std::string value;
};
Override parse_override(const std::string& text);

RunConfig parse_config_text(const std::string& text, const std::vector<Override>& overrides = {});
RunConfig parse_config_file(const std::string& path, const std::vector<Override>& overrides = {});

/// Canonical form: every field, SI suffixes, shortest round-tripping decimals.
std::string emit_config(const RunConfig& cfg);

/// Hex SHA-256 of the canonical form.
std::string config_hash(const RunConfig& cfg);

}  // namespace qkt::io
