#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qkt/experiments/experiments.hpp"

namespace qkt {

struct InvariantCheck {
  std::string name;
  double value = 0.0;      // measured residual (relative unless noted in the name)
  double tolerance = 0.0;
  bool passed = false;
};

/// Cheap model checks on the scenario's trap, pump and grid: no time integration. The
/// seed drives the Monte-Carlo estimate of the three-body loss integral.
std::vector<InvariantCheck> run_invariant_suite(const Scenario& sc, std::uint64_t seed = 1);

}  // namespace qkt
