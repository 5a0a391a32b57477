#include "qkt/io/run.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <variant>

#include "qkt/kinetics/kinetic_view.hpp"
#include "qkt/physics/constants.hpp"

#ifndef QKT_VERSION
#define QKT_VERSION "0.0.0"
#endif

namespace qkt::io {

namespace fs = std::filesystem;
using nlohmann::json;

std::string code_version() { return QKT_VERSION; }

namespace {

using Cell = std::variant<double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;  // names carry the unit suffix
  std::vector<std::vector<Cell>> rows;
};

std::string csv_field(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) {
    std::array<char, 64> buf{};
    const auto r = std::to_chars(buf.data(), buf.data() + buf.size(), *d);
    return std::string(buf.data(), r.ptr);
  }
  if (const auto* b = std::get_if<bool>(&c)) return *b ? "true" : "false";
  const std::string& s = std::get<std::string>(c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"') q += '"';
    q += ch;
  }
  return q + "\"";
}

json cell_json(const Cell& c) {
  if (const auto* d = std::get_if<double>(&c)) return std::isfinite(*d) ? json(*d) : json(nullptr);
  if (const auto* b = std::get_if<bool>(&c)) return *b;
  return std::get<std::string>(c);
}

class Writer {
 public:
  Writer(fs::path dir, std::string hash, const OutputBlock& out, RunResult& res)
      : dir_(std::move(dir)), hash_(std::move(hash)), out_(out), res_(res) {}

  void table(const std::string& stem, const Table& t) {
    if (out_.csv) {
      std::ofstream f = open(stem + ".csv");
      f << "# config_sha256=" << hash_ << " code_version=" << code_version() << "\n";
      for (std::size_t i = 0; i < t.columns.size(); ++i) f << (i ? "," : "") << t.columns[i];
      f << "\n";
      for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) f << (i ? "," : "") << csv_field(row[i]);
        f << "\n";
      }
    }
    if (out_.json) {
      json rows = json::array();
      for (const auto& row : t.rows) {
        json r = json::object();
        for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = cell_json(row[i]);
        rows.push_back(std::move(r));
      }
      document(stem + ".json", json{{"columns", t.columns}, {"rows", std::move(rows)}});
    }
  }

  void document(const std::string& name, json body) {
    body["config_sha256"] = hash_;
    body["code_version"] = code_version();
    std::ofstream f = open(name);
    f << body.dump(2) << "\n";
  }

  void text(const std::string& name, const std::string& content) {
    std::ofstream f = open(name);
    f << content;
  }

 private:
  std::ofstream open(const std::string& name) {
    const fs::path p = dir_ / name;
    std::ofstream f(p);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    res_.files.push_back(p.string());
    return f;
  }

  fs::path dir_;
  std::string hash_;
  const OutputBlock& out_;
  RunResult& res_;
};

const std::vector<std::string> kPointColumns = {
    "Phi_per_s", "T_K", "eps_cut_J", "gamma_per_s", "kappa_per_s", "eps_cut_over_kBT", "N0_atoms", "N_T_atoms",
    "fraction", "mu_J", "time_to_steady_s", "effective_flux_below_cut_per_s", "steady", "failed", "warm_started",
    "message"};

std::vector<Cell> point_cells(const SteadyPoint& p) {
  return {p.Phi, p.T, p.eps_cut, p.gamma, p.kappa, p.eps_cut_over_kT, p.N0, p.N_T, p.fraction, p.mu,
          p.time_to_steady, p.effective_flux_below_cut, p.steady, p.failed, p.warm_started, p.message};
}

json point_json(const SteadyPoint& p) {
  json j = json::object();
  const auto cells = point_cells(p);
  for (std::size_t i = 0; i < cells.size(); ++i) j[kPointColumns[i]] = cell_json(cells[i]);
  return j;
}

Table points_table(const std::vector<SteadyPoint>& pts) {
  Table t{kPointColumns, {}};
  for (const auto& p : pts) t.rows.push_back(point_cells(p));
  return t;
}

void write_errors(Writer& w, const std::vector<std::pair<std::size_t, SteadyPoint>>& failed) {
  if (failed.empty()) return;
  Table t{{"index", "Phi_per_s", "T_K", "eps_cut_J", "gamma_per_s", "message"}, {}};
  for (const auto& [i, p] : failed) {
    t.rows.push_back({static_cast<double>(i), p.Phi, p.T, p.eps_cut, p.gamma, p.message});
  }
  w.table("errors", t);
}

double weighted_sum(const KineticView& v, const std::vector<double>& rate) {
  double s = 0.0;
  for (std::size_t i = 0; i < rate.size() && i < v.w.size(); ++i) s += v.w[i] * rate[i];
  return s;
}

json rate_ledger(const EvolveResult& ev, const TrapSpecies& ts) {
  const ProcessRates& r = ev.final_rates;
  const KineticView v = make_view(ev.final_state, ts);
  const auto& n = r.d_rho_g_dt;
  return json{
      {"condensate",
       {{"thermal_condensate", r.dN0_dt.thermal_condensate},
        {"three_body", r.dN0_dt.three_body},
        {"outcoupling", r.dN0_dt.outcoupling},
        {"total", r.dN0_dt.total()}}},
      {"thermal",
       {{"thermal_thermal", weighted_sum(v, n.thermal_thermal)},
        {"thermal_condensate", weighted_sum(v, n.thermal_condensate)},
        {"three_body", weighted_sum(v, n.three_body)},
        {"replenishment", weighted_sum(v, n.replenishment)},
        {"redistribution", weighted_sum(v, n.redistribution)}}},
      {"evaporated",
       {{"thermal_thermal", r.evaporated.thermal_thermal},
        {"thermal_condensate", r.evaporated.thermal_condensate},
        {"replenishment", r.evaporated.replenishment},
        {"redistribution", r.evaporated.redistribution},
        {"total", r.evaporated.total()}}},
      {"replenishment_delivered", r.replenishment_delivered},
      {"dmu_dt_J_per_s", r.dmu_dt},
      {"cut_below_5_mu", r.cut_near_condensate}};
}

json number_ledger(const NumberLedger& L) {
  return json{{"source_total", L.source_total},   {"source_above_cut", L.source_above_cut},
              {"replenished", L.replenished},     {"evaporated", L.evaporated},
              {"three_body", L.three_body},       {"outcoupled", L.outcoupled},
              {"condensed", L.condensed},         {"seeded", L.seeded},
              {"net", L.net()}};
}

void log_line(const RunOptions& opt, const std::string& s) {
  if (opt.log) *opt.log << s << std::endl;
}

int run_simulate(const RunConfig& cfg, const RunOptions& opt, Writer& w, json& summary) {
  const Scenario& sc = cfg.scenario;
  log_line(opt, "simulate: eps_cut = " + std::to_string(sc.eps_cut() / (constants::k_B * sc.T)) + " k_B T, t_max = " +
                    std::to_string(sc.t_max) + " s");
  const SteadyRun run = solve_steady(sc);
  const EvolveResult& ev = run.evolution;
  Table traj{{"t_s", "N0_atoms", "N_T_atoms", "mu_J", "fraction"}, {}};
  for (const auto& s : ev.trajectory.samples) traj.rows.push_back({s.t, s.N0, s.N_T, s.mu, s.fraction});
  w.table("trajectory", traj);
  if (!ev.trajectory.snapshots.empty()) {
    Table snap{{"t_s", "eps_bar_J", "rho_bar_per_J", "g"}, {}};
    for (const auto& sn : ev.trajectory.snapshots) {
      for (std::size_t i = 0; i < sn.g.size(); ++i) snap.rows.push_back({sn.t, sn.eps_bar[i], sn.rho_bar[i], sn.g[i]});
    }
    w.table("snapshots", snap);
  }
  const SteadyPoint& p = run.point;
  summary["steady_state"] = point_json(p);
  summary["steady_state"]["t_final_s"] = ev.final_state.t;
  summary["steady_state"]["steps"] = ev.steps;
  summary["steady_state"]["rejected_steps"] = ev.rejected;
  summary["rates_atoms_per_s"] = rate_ledger(ev, sc.trap);
  summary["ledger_atoms"] = number_ledger(ev.ledger);
  log_line(opt, "simulate: N0 = " + std::to_string(p.N0) + ", fraction = " + std::to_string(p.fraction) +
                    (p.steady ? ", steady" : ", not steady") + (p.failed ? ", FAILED: " + p.message : ""));
  return p.failed ? 2 : 0;
}

int run_sweep(const RunConfig& cfg, const RunOptions& opt, Writer& w, json& summary) {
  SweepSpec spec;
  spec.varying = cfg.sweep.variable;
  spec.values = cfg.sweep.values;
  spec.base = cfg.scenario;
  spec.three_body = cfg.sweep.three_body;
  spec.cut_in_kT = cfg.sweep.cut_in_kT;
  spec.warm_start = cfg.sweep.warm_start;
  log_line(opt, "sweep: " + to_string(spec.varying) + " over " + std::to_string(spec.values.size()) + " values");
  const SweepResult r = sweep(spec);
  w.table("points", points_table(r.points));
  std::vector<std::pair<std::size_t, SteadyPoint>> failed;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    if (r.points[i].failed) failed.emplace_back(i, r.points[i]);
  }
  write_errors(w, failed);
  summary["variable"] = to_string(spec.varying);
  summary["points"] = r.points.size();
  summary["failed_points"] = failed.size();
  summary["N0_non_decreasing"] = r.non_decreasing;
  summary["N0_non_increasing"] = r.non_increasing;
  summary["monotonic_noise"] = r.noise;
  return failed.empty() ? 0 : 2;
}

std::pair<double, double> cut_bracket(const RunConfig& cfg) {
  const auto& b = cfg.optimize.bracket;
  if (cfg.optimize.bracket_in_J) return b;
  const double kT = constants::k_B * cfg.scenario.T;
  return {b.first * kT, b.second * kT};
}

OptimizeOptions optimize_options(const OptimizeBlock& b) { return OptimizeOptions{b.prescan, b.rel_tol, b.warm_start}; }

int run_optimize(const RunConfig& cfg, const RunOptions& opt, Writer& w, json& summary) {
  const auto bracket = cut_bracket(cfg);
  log_line(opt, "optimize-cut: bracket [" + std::to_string(bracket.first) + ", " + std::to_string(bracket.second) + "] J");
  const CutOptimum o = optimize_eps_cut(cfg.scenario, bracket, optimize_options(cfg.optimize));
  w.table("evaluations", points_table(o.evaluations));
  std::vector<std::pair<std::size_t, SteadyPoint>> failed;
  for (std::size_t i = 0; i < o.evaluations.size(); ++i) {
    if (o.evaluations[i].failed) failed.emplace_back(i, o.evaluations[i]);
  }
  write_errors(w, failed);
  summary["eps_cut_J"] = o.eps_cut;
  summary["eps_cut_over_kBT"] = o.eps_cut / (constants::k_B * cfg.scenario.T);
  summary["N0_atoms"] = o.N0;
  summary["interior_max"] = o.interior_max;
  summary["evaluations"] = o.evaluations.size();
  summary["failed_evaluations"] = failed.size();
  summary["best"] = point_json(o.best);
  return o.best.failed ? 2 : 0;
}

int run_kappa_scan(const RunConfig& cfg, const RunOptions& opt, Writer& w, json& summary) {
  KappaScanSpec spec;
  const KappaScanBlock& k = cfg.kappa_scan;
  spec.Phi_range = k.Phi_range;
  spec.T_range = k.T_range;
  spec.Phi_count = k.Phi_count;
  spec.T_count = k.T_count;
  spec.pairs = k.pairs;
  spec.cut_bracket_kT = k.cut_bracket_kT;
  spec.base = cfg.scenario;
  spec.optimize = optimize_options(cfg.optimize);
  spec.thresholds = GroupThresholds{k.group_high, k.group_low};
  spec.workers = std::max<std::size_t>(1, opt.workers);
  log_line(opt, "kappa-scan: " + std::to_string(spec.pairs.empty() ? spec.Phi_count * spec.T_count : spec.pairs.size()) +
                    " points on " + std::to_string(spec.workers) + " workers");
  const std::vector<ScanPoint> pts = kappa_scan(spec);
  Table t{kPointColumns, {}};
  t.columns.emplace_back("group");
  t.columns.emplace_back("interior_max");
  Table ev{kPointColumns, {}};
  ev.columns.insert(ev.columns.begin(), "point_index");
  std::vector<std::pair<std::size_t, SteadyPoint>> failed;
  json groups = json{{"high_T", 0}, {"marginal", 0}, {"low_T", 0}};
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto row = point_cells(pts[i].point);
    row.emplace_back(to_string(pts[i].group));
    row.emplace_back(pts[i].interior_max);
    t.rows.push_back(std::move(row));
    for (const auto& e : pts[i].evaluations) {
      auto r = point_cells(e);
      r.insert(r.begin(), Cell(static_cast<double>(i)));
      ev.rows.push_back(std::move(r));
    }
    if (pts[i].point.failed) {
      failed.emplace_back(i, pts[i].point);
    } else {
      groups[to_string(pts[i].group)] = groups[to_string(pts[i].group)].get<int>() + 1;
    }
  }
  w.table("points", t);
  w.table("evaluations", ev);
  write_errors(w, failed);
  summary["points"] = pts.size();
  summary["failed_points"] = failed.size();
  summary["groups"] = groups;
  return failed.empty() ? 0 : 2;
}

int run_sources(const RunConfig& cfg, const RunOptions& opt, Writer& w, json& summary) {
  const std::string path = opt.catalog.empty() ? cfg.sources.catalog : opt.catalog;
  if (path.empty()) throw ConfigError({"sources: no catalog given (experiment.sources.catalog or --catalog)"});
  const auto verdicts = evaluate_sources(read_catalog(path), cfg.scenario.trap, cfg.sources.threshold);
  Table t{{"name", "phi_per_s", "T_K", "kappa_per_s", "comparison_only", "above_threshold", "passes"}, {}};
  json passing = json::array();
  for (const auto& v : verdicts) {
    t.rows.push_back({v.source.name, v.source.Phi, v.source.T, v.kappa, v.source.comparison_only, v.above_threshold,
                      v.passes});
    if (v.passes) passing.push_back(v.source.name);
  }
  w.table("sources", t);
  summary["catalog"] = path;
  summary["threshold_per_s"] = cfg.sources.threshold;
  summary["rows"] = verdicts.size();
  summary["passing"] = passing;
  log_line(opt, "sources: " + std::to_string(verdicts.size()) + " rows, " + std::to_string(passing.size()) + " pass");
  return 0;
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream o;
  o << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return o.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

std::vector<SourceEntry> read_catalog(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"catalog: cannot open '" + path + "'"});
  std::string line;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    header = split_csv_line(line);
    break;
  }
  auto col = [&](const std::string& name) -> long {
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (header[i] == name) return static_cast<long>(i);
    }
    return -1;
  };
  const long c_name = col("name"), c_phi = col("phi_per_s"), c_T = col("T_K"), c_cmp = col("comparison_only");
  if (c_name < 0 || c_phi < 0 || c_T < 0) throw ConfigError({"catalog: header must contain name,phi_per_s,T_K"});
  std::vector<SourceEntry> out;
  std::vector<std::string> errs;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const auto f = split_csv_line(line);
    if (f.size() != header.size()) {
      errs.push_back("catalog line " + std::to_string(lineno) + ": expected " + std::to_string(header.size()) + " fields");
      continue;
    }
    SourceEntry e;
    e.name = f[static_cast<std::size_t>(c_name)];
    try {
      e.Phi = std::stod(f[static_cast<std::size_t>(c_phi)]);
      e.T = std::stod(f[static_cast<std::size_t>(c_T)]);
    } catch (const std::exception&) {
      errs.push_back("catalog line " + std::to_string(lineno) + ": phi_per_s and T_K must be numbers");
      continue;
    }
    if (c_cmp >= 0) {
      const std::string& v = f[static_cast<std::size_t>(c_cmp)];
      if (v == "true" || v == "1") {
        e.comparison_only = true;
      } else if (v != "false" && v != "0" && !v.empty()) {
        errs.push_back("catalog line " + std::to_string(lineno) + ": comparison_only must be true or false");
      }
    }
    out.push_back(std::move(e));
  }
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return out;
}

RunResult run(const RunConfig& cfg, const RunOptions& opt) {
  RunResult res;
  res.config_hash = config_hash(cfg);
  res.out_dir = opt.out_dir.empty() ? cfg.output.directory : opt.out_dir;
  fs::create_directories(res.out_dir);
  Writer w(res.out_dir, res.config_hash, cfg.output, res);
  w.text("config.yaml", emit_config(cfg));

  json summary = json::object();
  summary["mode"] = to_string(cfg.mode);
  switch (cfg.mode) {
    case RunMode::simulate: res.exit_code = run_simulate(cfg, opt, w, summary); break;
    case RunMode::sweep: res.exit_code = run_sweep(cfg, opt, w, summary); break;
    case RunMode::optimize_cut: res.exit_code = run_optimize(cfg, opt, w, summary); break;
    case RunMode::kappa_scan: res.exit_code = run_kappa_scan(cfg, opt, w, summary); break;
    case RunMode::sources: res.exit_code = run_sources(cfg, opt, w, summary); break;
  }
  w.document("summary.json", summary);
  res.summary = summary;
  w.document("provenance.json", json{{"timestamp_utc", utc_timestamp()}, {"mode", to_string(cfg.mode)}});
  return res;
}

}  // namespace qkt::io
