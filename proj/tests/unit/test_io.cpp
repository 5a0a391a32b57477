#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "qkt/io/config.hpp"
#include "qkt/io/run.hpp"
#include "qkt/physics/constants.hpp"

using namespace qkt;
namespace fs = std::filesystem;

namespace {
std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::vector<std::string> errors_of(const std::string& text) {
  try {
    io::parse_config_text(text);
  } catch (const io::ConfigError& e) {
    return e.errors();
  }
  return {};
}

bool mentions(const std::vector<std::string>& errs, const std::string& what) {
  for (const auto& e : errs) {
    if (e.find(what) != std::string::npos) return true;
  }
  return false;
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qkt_unit_" + name);
  fs::remove_all(p);
  return p;
}

const std::string kMinimal = R"(
trap: {omega_r_Hz: 110, omega_z_Hz: 14, mass_amu: 86.909, scattering_length_a0: 100, L3_cm6_per_s: 5.8e-30}
pump: {Phi_per_s: 8.4e5, T_uK: 0.54, eps_cut_kBT: 3, gamma_per_s: 0.3}
experiment: {mode: simulate}
)";
}  // namespace

TEST_CASE("config: the shipped reference file parses to the reference scenario") {
  const auto cfg = io::parse_config_file(QKT_SOURCE_DIR "/configs/reference.config");
  const auto& sc = cfg.scenario;
  CHECK(cfg.mode == io::RunMode::simulate);
  CHECK(sc.trap.omega_r == doctest::Approx(2.0 * constants::pi * 110.0).epsilon(1e-14));
  CHECK(sc.trap == TrapSpecies::rb87_reference());
  CHECK(sc.Phi == 8.4e5);
  CHECK(sc.T == doctest::Approx(540e-9).epsilon(1e-14));
  CHECK(sc.eps_cut_kT == 3.0);
  CHECK(sc.eps_cut_J == 0.0);
  CHECK(sc.gamma == 0.3);
  CHECK(sc.grid_nodes == 400);
  CHECK(sc.t_max == 60.0);
  CHECK(sc.integrator.snapshot_times.size() == 5);
  CHECK(cfg.output.directory == "results/reference");
}

TEST_CASE("config: unit suffixes convert to SI") {
  const auto cfg = io::parse_config_text(kMinimal);
  CHECK(cfg.scenario.trap.scattering_length == doctest::Approx(100.0 * constants::bohr_radius).epsilon(1e-14));
  CHECK(cfg.scenario.trap.L3 == doctest::Approx(5.8e-42).epsilon(1e-14));
  CHECK(cfg.scenario.trap.mass == doctest::Approx(86.909 * 1.66053906660e-27).epsilon(1e-9));
  CHECK(cfg.scenario.T == doctest::Approx(540e-9).epsilon(1e-14));
}

TEST_CASE("config: every problem is reported at once") {
  const auto empty = errors_of("");
  CHECK(mentions(empty, "trap"));
  CHECK(mentions(empty, "pump"));
  CHECK(mentions(empty, "experiment"));

  const auto bad = errors_of(R"(
trap: {omega_r_Hz: 110, omega_z_Hz: 14, mass_kg: 1.44316e-25, scattering_length_m: 5.29e-9, L3_m6_per_s: 5.8e-42}
pump: {Phi_per_s: 8.4e5, T_nK: 540, eps_cut_kBT: 3, eps_cut_J: 1e-29, gamma: 0.3, colour: red}
grid: {nodes: -4}
experiment: {mode: teleport}
)");
  CHECK(bad.size() >= 4);
  CHECK(mentions(bad, "eps_cut"));
  CHECK(mentions(bad, "gamma"));
  CHECK(mentions(bad, "colour"));
  CHECK(mentions(bad, "teleport"));
  CHECK(mentions(bad, "nodes"));

  const auto wrong_unit = errors_of(R"(
trap: {omega_r_Hz: 110, omega_z_Hz: 14, mass_kg: 1.44316e-25, scattering_length_m: 5.29e-9, L3_m6_per_s: 5.8e-42}
pump: {Phi_per_s: 8.4e5, T_s: 540, eps_cut_kBT: 3, gamma_per_s: 0.3}
experiment: {mode: simulate}
)");
  CHECK(mentions(wrong_unit, "T_s"));
}

TEST_CASE("config: canonical form round-trips and hashes stably") {
  const auto cfg = io::parse_config_file(QKT_SOURCE_DIR "/configs/reference.config");
  const std::string text = io::emit_config(cfg);
  const auto back = io::parse_config_text(text);
  CHECK(back == cfg);
  CHECK(io::emit_config(back) == text);
  CHECK(io::config_hash(back) == io::config_hash(cfg));
  CHECK(io::config_hash(cfg).size() == 64);
  auto other = cfg;
  other.scenario.gamma = 0.31;
  CHECK(io::config_hash(other) != io::config_hash(cfg));

  io::RunConfig sweep_cfg;
  sweep_cfg.mode = io::RunMode::kappa_scan;
  sweep_cfg.kappa_scan.pairs = {{3.4e10, 40e-6}, {1.1e11, 60e-6}};
  sweep_cfg.sweep.variable = SweepVariable::eps_cut;
  sweep_cfg.sweep.values = {1.2, 3.0};
  CHECK(io::parse_config_text(io::emit_config(sweep_cfg)) == sweep_cfg);
}

TEST_CASE("config: overrides replace values and units") {
  const auto cfg = io::parse_config_file(QKT_SOURCE_DIR "/configs/reference.config",
                                         {io::parse_override("pump.gamma_per_s=0.6"),
                                          io::parse_override("pump.T_uK=0.6"),
                                          io::parse_override("pump.eps_cut_J=2e-29"),
                                          io::parse_override("grid.nodes=800")});
  CHECK(cfg.scenario.gamma == 0.6);
  CHECK(cfg.scenario.T == doctest::Approx(600e-9).epsilon(1e-14));
  CHECK(cfg.scenario.eps_cut_J == 2e-29);
  CHECK(cfg.scenario.grid_nodes == 800);
  CHECK_THROWS_AS(io::parse_override("no-equals-sign"), io::ConfigError);
  CHECK_THROWS_AS(io::parse_config_file(QKT_SOURCE_DIR "/configs/reference.config", {io::parse_override("pump.gamma_per_s=-1")}),
                  io::ConfigError);
}

TEST_CASE("catalog: header checks and quoted names") {
  const fs::path dir = scratch("catalog");
  fs::create_directories(dir);
  {
    std::ofstream f(dir / "ok.csv");
    f << "name,phi_per_s,T_K\n\"Oven, hot\",1e9,1e-3\nMOT,3e8,8e-6\n";
  }
  const auto cat = io::read_catalog((dir / "ok.csv").string());
  REQUIRE(cat.size() == 2);
  CHECK(cat[0].name == "Oven, hot");
  CHECK_FALSE(cat[0].comparison_only);
  {
    std::ofstream f(dir / "bad.csv");
    f << "name,phi\nx,1\n";
  }
  CHECK_THROWS(io::read_catalog((dir / "bad.csv").string()));
  CHECK_THROWS(io::read_catalog((dir / "missing.csv").string()));
}

TEST_CASE("run: identical configs give identical tables") {
  auto cfg = io::parse_config_file(QKT_SOURCE_DIR "/configs/trap.config");
  cfg.sources.catalog = QKT_SOURCE_DIR "/data/sources.csv";
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  const auto ra = io::run(cfg, {a.string()});
  const auto rb = io::run(cfg, {b.string()});
  CHECK(ra.exit_code == 0);
  CHECK(ra.config_hash == rb.config_hash);
  for (const char* f : {"sources.csv", "sources.json", "summary.json", "config.yaml"}) {
    INFO(f);
    REQUIRE(fs::exists(a / f));
    CHECK(slurp(a / f) == slurp(b / f));
  }
  CHECK(fs::exists(a / "provenance.json"));
  const std::string csv = slurp(a / "sources.csv");
  CHECK(csv.rfind("# config_sha256=" + ra.config_hash, 0) == 0);
  CHECK(csv.find("kappa_per_s") != std::string::npos);
  // the written config reproduces the run
  CHECK(io::parse_config_file((a / "config.yaml").string()) == cfg);
}

TEST_CASE("run: failed sweep points land in the errors table") {
  auto cfg = io::parse_config_file(QKT_SOURCE_DIR "/configs/reference.config",
                                   {io::parse_override("grid.nodes=40"), io::parse_override("integrator.max_steps=5")});
  cfg.mode = io::RunMode::sweep;
  cfg.sweep.variable = SweepVariable::gamma;
  cfg.sweep.values = {0.2, 0.4};
  cfg.output.json = false;
  const fs::path dir = scratch("errors");
  const auto r = io::run(cfg, {dir.string()});
  CHECK(r.exit_code == 2);
  CHECK(fs::exists(dir / "points.csv"));
  CHECK_FALSE(fs::exists(dir / "points.json"));
  REQUIRE(fs::exists(dir / "errors.csv"));
  CHECK(slurp(dir / "errors.csv").find("maximum step count") != std::string::npos);
}
