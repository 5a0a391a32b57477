#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "qkt/experiments/experiments.hpp"
#include "qkt/io/config.hpp"

namespace qkt::io {

std::string code_version();

/// Catalog of replenishment sources: delimited text with header name,phi_per_s,T_K and an
/// optional comparison_only column (true/false or 1/0).
std::vector<SourceEntry> read_catalog(const std::string& path);

struct RunOptions {
  std::string out_dir;      // replaces output.directory when non-empty
  std::string catalog;      // replaces experiment.sources.catalog when non-empty
  std::size_t workers = 1;
  std::ostream* log = nullptr;
};

struct RunResult {
  int exit_code = 0;  // 0 success, 2 solver failure
  std::string config_hash;
  std::string out_dir;
  std::vector<std::string> files;
  nlohmann::json summary;
};

/// Runs the configured experiment and writes its tables (CSV and/or JSON), summary.json,
/// the canonical config and provenance.json (the only file with a wall-clock timestamp).
/// Scans with failed points still write every completed row plus errors.csv.
RunResult run(const RunConfig& cfg, const RunOptions& opt = {});

}  // namespace qkt::io
