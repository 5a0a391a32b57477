// Command-line front end: one subcommand per experiment plus `validate`.
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qkt/experiments/invariants.hpp"
#include "qkt/io/config.hpp"
#include "qkt/io/run.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitSolver = 2;
constexpr int kExitUsage = 64;

struct Args {
  std::string config;
  std::string out;
  std::string catalog;
  std::size_t workers = 0;
  std::uint64_t seed = 1;
  std::vector<std::string> overrides;
  bool quiet = false;
};

std::size_t workers_from_env() {
  if (const char* w = std::getenv("QKT_WORKERS")) {
    try {
      const long n = std::stol(w);
      if (n > 0) return static_cast<std::size_t>(n);
    } catch (const std::exception&) {
    }
    std::cerr << "warning: ignoring QKT_WORKERS='" << w << "'\n";
  }
  return 1;
}

qkt::io::RunConfig load(const Args& a) {
  std::vector<qkt::io::Override> ov;
  for (const auto& s : a.overrides) ov.push_back(qkt::io::parse_override(s));
  if (a.config.empty()) return qkt::io::parse_config_text(qkt::io::emit_config(qkt::io::RunConfig{}), ov);
  return qkt::io::parse_config_file(a.config, ov);
}

int validate(const Args& a) {
  const qkt::io::RunConfig cfg = load(a);
  const auto checks = qkt::run_invariant_suite(cfg.scenario, a.seed);
  bool ok = true;
  for (const auto& c : checks) {
    std::cout << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.value << " (tolerance " << c.tolerance << ")\n";
    ok = ok && c.passed;
  }
  std::cout << "config_sha256 " << qkt::io::config_hash(cfg) << "\n";
  return ok ? kExitOk : kExitInvalid;
}

int execute(qkt::io::RunMode mode, const Args& a) {
  qkt::io::RunConfig cfg = load(a);
  cfg.mode = mode;
  if (mode == qkt::io::RunMode::sweep && cfg.sweep.values.empty()) {
    throw qkt::io::ConfigError({"experiment.sweep: sweep needs a variable and values"});
  }
  qkt::io::RunOptions opt;
  opt.out_dir = a.out;
  opt.catalog = a.catalog;
  opt.workers = a.workers ? a.workers : workers_from_env();
  opt.log = a.quiet ? nullptr : &std::cerr;
  const qkt::io::RunResult r = qkt::io::run(cfg, opt);
  if (!a.quiet) {
    for (const auto& f : r.files) std::cerr << "wrote " << f << "\n";
  }
  return r.exit_code == 0 ? kExitOk : kExitSolver;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pumped atom laser kinetics: steady states, sweeps and source figures of merit"};
  app.require_subcommand(1);
  Args a;
  auto common = [&](CLI::App* sub) {
    sub->add_option("--config", a.config, "config file (YAML with unit-suffixed keys)");
    sub->add_option("--override", a.overrides, "dotted key=value, e.g. pump.gamma_per_s=0.6")->take_all();
    sub->add_flag("--quiet", a.quiet, "no progress output");
  };
  auto outputs = [&](CLI::App* sub) {
    sub->add_option("--out", a.out, "output directory (default: output.directory)");
    sub->add_option("--workers", a.workers, "worker threads for scans (default: $QKT_WORKERS or 1)")
        ->check(CLI::PositiveNumber);
  };

  struct Cmd {
    const char* name;
    const char* help;
    qkt::io::RunMode mode;
  };
  const std::vector<Cmd> cmds = {
      {"simulate", "integrate one scenario to steady state", qkt::io::RunMode::simulate},
      {"sweep", "steady N0 over one parameter", qkt::io::RunMode::sweep},
      {"optimize-cut", "maximize steady N0 over the evaporation cut", qkt::io::RunMode::optimize_cut},
      {"kappa-scan", "optimal N0 over a (Phi, T) grid", qkt::io::RunMode::kappa_scan},
      {"sources", "phase-space flux of a source catalog", qkt::io::RunMode::sources},
  };
  std::vector<std::pair<CLI::App*, qkt::io::RunMode>> subs;
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    common(sub);
    outputs(sub);
    if (c.mode == qkt::io::RunMode::sources) sub->add_option("--catalog", a.catalog, "csv with name,phi_per_s,T_K");
    subs.emplace_back(sub, c.mode);
  }
  CLI::App* val = app.add_subcommand("validate", "run the invariant suite on a config without a full solve");
  common(val);
  val->add_option("--seed", a.seed, "seed of the Monte-Carlo checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (val->parsed()) return validate(a);
    for (const auto& [sub, mode] : subs) {
      if (sub->parsed()) return execute(mode, a);
    }
  } catch (const qkt::io::ConfigError& e) {
    std::cerr << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
  return kExitUsage;
}
