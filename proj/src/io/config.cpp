#include "qkt/io/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <openssl/evp.h>
#include <yaml-cpp/yaml.h>

#include "qkt/physics/constants.hpp"

namespace qkt::io {

namespace {

enum class Dim { none, count, rate, temperature, energy, mass, length, L3, time, angular };

struct Unit {
  const char* suffix;
  double scale;  // SI value of one unit
};

const std::vector<Unit>& units(Dim d) {
  static const std::map<Dim, std::vector<Unit>> table = {
      {Dim::count, {{"atoms", 1.0}}},
      {Dim::rate, {{"per_s", 1.0}}},
      {Dim::temperature, {{"K", 1.0}, {"mK", 1e-3}, {"uK", 1e-6}, {"nK", 1e-9}}},
      {Dim::energy, {{"J", 1.0}}},
      {Dim::mass, {{"kg", 1.0}, {"amu", 1.66053906660e-27}}},
      {Dim::length, {{"m", 1.0}, {"nm", 1e-9}, {"a0", constants::bohr_radius}}},
      {Dim::L3, {{"m6_per_s", 1.0}, {"cm6_per_s", 1e-12}}},
      {Dim::time, {{"s", 1.0}, {"ms", 1e-3}}},
      {Dim::angular, {{"rad_per_s", 1.0}, {"Hz", 2.0 * constants::pi}}},
  };
  static const std::vector<Unit> none;
  auto it = table.find(d);
  return it == table.end() ? none : it->second;
}

std::string expected_keys(const std::string& base, Dim d) {
  std::string s;
  for (const auto& u : units(d)) {
    if (!s.empty()) s += ", ";
    s += base + "_" + u.suffix;
  }
  return s;
}

const std::vector<std::string>& all_suffixes() {
  static const std::vector<std::string> list = [] {
    std::vector<std::string> v{"kBT"};
    for (Dim d : {Dim::count, Dim::rate, Dim::temperature, Dim::energy, Dim::mass, Dim::length, Dim::L3, Dim::time,
                  Dim::angular}) {
      for (const auto& u : units(d)) v.emplace_back(u.suffix);
    }
    return v;
  }();
  return list;
}

bool is_known_suffix(const std::string& s) {
  for (const auto& u : all_suffixes()) {
    if (s == u) return true;
  }
  return false;
}

using Errors = std::vector<std::string>;

// One mapping of the config tree. Lookups claim keys; finish() reports the rest.
class Block {
 public:
  Block(YAML::Node node, std::string path, Errors& errs) : node_(std::move(node)), path_(std::move(path)), errs_(errs) {
    if (node_ && !node_.IsNull() && !node_.IsMap()) {
      error(path_ + ": expected a mapping");
      node_ = YAML::Node();
    }
    if (node_ && node_.IsMap()) {
      for (const auto& kv : node_) keys_.push_back(kv.first.as<std::string>());
    }
  }

  bool present() const { return node_ && node_.IsMap(); }
  const std::string& path() const { return path_; }

  // Finds the key holding quantity `base`: exact for dimensionless values, base_<unit>
  // otherwise. Returns the node and SI scale.
  std::optional<std::pair<YAML::Node, double>> find(const std::string& base, Dim dim, bool required) {
    declared_.emplace_back(base, dim);
    std::optional<std::pair<YAML::Node, double>> hit;
    std::string hit_key;
    for (const auto& k : keys_) {
      double scale = 0.0;
      if (dim == Dim::none) {
        if (k != base) continue;
        scale = 1.0;
      } else {
        if (k.size() <= base.size() + 1 || k.compare(0, base.size() + 1, base + "_") != 0) continue;
        const std::string suffix = k.substr(base.size() + 1);
        bool ok = false;
        for (const auto& u : units(dim)) {
          if (suffix == u.suffix) {
            scale = u.scale;
            ok = true;
          }
        }
        if (!ok) continue;
      }
      claimed_.insert(k);
      if (hit) {
        error(path_ + ": '" + hit_key + "' and '" + k + "' give the same quantity");
        continue;
      }
      hit.emplace(node_[k], scale);
      hit_key = k;
    }
    if (!hit && required && present()) {
      error(path_ + ": missing required key " + (dim == Dim::none ? base : expected_keys(base, dim)));
    }
    return hit;
  }

  bool number(const std::string& base, Dim dim, double& out, bool required = false) {
    auto f = find(base, dim, required);
    if (!f) return false;
    double v = 0.0;
    if (!scalar(f->first, base, v)) return false;
    out = v * f->second;
    return true;
  }

  bool count(const std::string& base, std::size_t& out, bool required = false) {
    auto f = find(base, Dim::none, required);
    if (!f) return false;
    double v = 0.0;
    if (!scalar(f->first, base, v)) return false;
    if (v < 0.0 || v != std::floor(v) || v > 1e15) {
      error(path_ + "." + base + ": expected a non-negative integer");
      return false;
    }
    out = static_cast<std::size_t>(v);
    return true;
  }

  bool boolean(const std::string& base, bool& out) {
    auto f = find(base, Dim::none, false);
    if (!f) return false;
    try {
      out = f->first.as<bool>();
      return true;
    } catch (const YAML::Exception&) {
      error(path_ + "." + base + ": expected true or false");
      return false;
    }
  }

  bool text(const std::string& base, std::string& out, bool required = false) {
    auto f = find(base, Dim::none, required);
    if (!f) return false;
    if (!f->first.IsScalar()) {
      error(path_ + "." + base + ": expected a string");
      return false;
    }
    out = f->first.as<std::string>();
    return true;
  }

  bool numbers(const std::string& base, Dim dim, std::vector<double>& out, bool required = false) {
    auto f = find(base, dim, required);
    if (!f) return false;
    if (!f->first.IsSequence()) {
      error(path_ + "." + base + ": expected a list of numbers");
      return false;
    }
    std::vector<double> v;
    for (const auto& item : f->first) {
      double x = 0.0;
      if (!scalar(item, base, x)) return false;
      v.push_back(x * f->second);
    }
    out = std::move(v);
    return true;
  }

  bool range(const std::string& base, Dim dim, std::pair<double, double>& out, bool required = false) {
    std::vector<double> v;
    if (!numbers(base, dim, v, required)) return false;
    if (v.size() != 2 || !(v[0] < v[1])) {
      error(path_ + "." + base + ": expected [low, high] with low < high");
      return false;
    }
    out = {v[0], v[1]};
    return true;
  }

  Block child(const std::string& name, bool required = false) {
    std::optional<YAML::Node> n = raw(name);
    if (!n && required) error("missing required block '" + (path_.empty() ? name : path_ + "." + name) + "'");
    if (n && n->IsNull()) n = YAML::Node(YAML::NodeType::Map);
    return Block(n ? *n : YAML::Node(), path_.empty() ? name : path_ + "." + name, errs_);
  }

  Block item(const YAML::Node& n, const std::string& path) { return Block(n, path, errs_); }

  std::optional<YAML::Node> raw(const std::string& name) {
    declared_.emplace_back(name, Dim::none);
    for (const auto& k : keys_) {
      if (k == name) {
        claimed_.insert(k);
        return node_[k];
      }
    }
    return std::nullopt;
  }

  void finish() {
    for (const auto& k : keys_) {
      if (claimed_.count(k)) continue;
      std::string best;
      Dim best_dim = Dim::none;
      for (const auto& [base, dim] : declared_) {
        if (dim == Dim::none) continue;
        if ((k == base || k.compare(0, base.size() + 1, base + "_") == 0) && base.size() > best.size()) {
          best = base;
          best_dim = dim;
        }
      }
      const std::string where = path_.empty() ? k : path_ + "." + k;
      if (!best.empty() && k == best) {
        error(where + ": missing unit suffix (expected " + expected_keys(best, best_dim) + ")");
      } else if (!best.empty()) {
        error(where + ": unit suffix mismatch (expected " + expected_keys(best, best_dim) + ")");
      } else {
        error(where + ": unknown key");
      }
    }
  }

  void error(const std::string& msg) { errs_.push_back(msg); }

 private:
  bool scalar(const YAML::Node& n, const std::string& base, double& out) {
    try {
      if (!n.IsScalar()) throw YAML::Exception(YAML::Mark::null_mark(), "not a scalar");
      out = n.as<double>();
    } catch (const YAML::Exception&) {
      error(path_ + "." + base + ": expected a number");
      return false;
    }
    if (!std::isfinite(out)) {
      error(path_ + "." + base + ": value must be finite");
      return false;
    }
    return true;
  }

  YAML::Node node_;
  std::string path_;
  Errors& errs_;
  std::vector<std::string> keys_;
  std::set<std::string> claimed_;
  std::vector<std::pair<std::string, Dim>> declared_;
};

Dim sweep_dim(SweepVariable v) {
  switch (v) {
    case SweepVariable::Phi:
    case SweepVariable::gamma: return Dim::rate;
    case SweepVariable::T: return Dim::temperature;
    case SweepVariable::eps_cut: return Dim::energy;
  }
  return Dim::none;
}

void read_trap(Block b, TrapSpecies& ts) {
  b.number("omega_r", Dim::angular, ts.omega_r, true);
  b.number("omega_z", Dim::angular, ts.omega_z, true);
  b.number("mass", Dim::mass, ts.mass, true);
  b.number("scattering_length", Dim::length, ts.scattering_length, true);
  b.number("L3", Dim::L3, ts.L3, true);
  b.finish();
}

void read_pump(Block b, Scenario& sc, bool required) {
  b.number("Phi", Dim::rate, sc.Phi, required);
  b.number("T", Dim::temperature, sc.T, required);
  b.number("gamma", Dim::rate, sc.gamma, required);
  b.number("N_source", Dim::count, sc.N_source);
  double J = 0.0, kT = 0.0;
  const bool has_J = b.number("eps_cut", Dim::energy, J);
  const bool has_kT = b.number("eps_cut_kBT", Dim::none, kT);
  if (has_J && has_kT) {
    b.error(b.path() + ": eps_cut_J and eps_cut_kBT are mutually exclusive");
  } else if (has_J) {
    sc.eps_cut_J = J;
  } else if (has_kT) {
    sc.eps_cut_J = 0.0;
    sc.eps_cut_kT = kT;
  } else if (required && b.present()) {
    b.error(b.path() + ": missing required key eps_cut_J or eps_cut_kBT");
  }
  b.finish();
}

void read_initial(Block b, Scenario& sc) {
  b.number("N_initial", Dim::count, sc.N_initial);
  b.number("N0_seed", Dim::count, sc.N0_seed);
  b.number("N0_floor", Dim::count, sc.N0_floor);
  b.finish();
}

void read_grid(Block b, Scenario& sc) {
  b.count("nodes", sc.grid_nodes);
  b.finish();
}

void read_integrator(Block b, Scenario& sc) {
  IntegratorConfig& c = sc.integrator;
  b.number("rtol", Dim::none, c.rtol);
  b.number("atol_N0", Dim::count, c.atol_N0);
  b.number("atol_g", Dim::none, c.atol_g);
  b.number("dt_init", Dim::time, c.dt_init);
  b.number("dt_max", Dim::time, c.dt_max);
  b.number("dt_min", Dim::time, c.dt_min);
  b.number("steady_window", Dim::time, c.steady_window);
  b.number("steady_frac", Dim::none, c.steady_frac);
  b.number("steady_abs", Dim::count, c.steady_abs);
  b.number("steady_balance", Dim::none, c.steady_balance);
  b.count("max_steps", c.max_steps);
  b.number("t_max", Dim::time, sc.t_max);
  b.finish();
}

void read_processes(Block b, ProcessToggles& p) {
  b.boolean("thermal_thermal", p.thermal_thermal);
  b.boolean("thermal_condensate", p.thermal_condensate);
  b.boolean("three_body", p.three_body);
  b.boolean("replenishment", p.replenishment);
  b.boolean("redistribution", p.redistribution);
  b.boolean("outcoupling", p.outcoupling);
  b.finish();
}

void read_sweep(Block b, SweepBlock& s, bool required) {
  std::string var;
  if (b.text("variable", var, required)) {
    if (auto v = sweep_variable_from_string(var)) {
      s.variable = *v;
    } else {
      b.error(b.path() + ".variable: expected one of Phi, T, eps_cut, gamma");
    }
  }
  b.boolean("three_body", s.three_body);
  b.boolean("warm_start", s.warm_start);
  bool found = false;
  if (s.variable == SweepVariable::eps_cut) {
    std::vector<double> kT, J;
    const bool has_kT = b.numbers("values_kBT", Dim::none, kT);
    const bool has_J = b.numbers("values", Dim::energy, J);
    if (has_kT && has_J) {
      b.error(b.path() + ": values_J and values_kBT are mutually exclusive");
    } else if (has_kT || has_J) {
      s.cut_in_kT = has_kT;
      s.values = has_kT ? kT : J;
      found = true;
    }
    if (!found && required) b.error(b.path() + ": missing required key values_J or values_kBT");
  } else {
    found = b.numbers("values", sweep_dim(s.variable), s.values, required);
  }
  if (found && s.values.empty()) b.error(b.path() + ": sweep needs at least one value");
  for (double v : s.values) {
    if (!(v > 0.0)) {
      b.error(b.path() + ": sweep values must be positive");
      break;
    }
  }
  b.finish();
}

void read_optimize(Block b, OptimizeBlock& o) {
  std::pair<double, double> kT, J;
  const bool has_kT = b.range("bracket_kBT", Dim::none, kT);
  const bool has_J = b.range("bracket", Dim::energy, J);
  if (has_kT && has_J) {
    b.error(b.path() + ": bracket_J and bracket_kBT are mutually exclusive");
  } else if (has_kT || has_J) {
    o.bracket = has_kT ? kT : J;
    o.bracket_in_J = has_J;
    if (!(o.bracket.first > 0.0)) b.error(b.path() + ": bracket must be positive");
  }
  std::size_t prescan = static_cast<std::size_t>(o.prescan);
  if (b.count("prescan", prescan)) {
    if (prescan < 3 || prescan > 1000) b.error(b.path() + ".prescan: expected 3..1000");
    o.prescan = static_cast<int>(prescan);
  }
  if (b.number("rel_tol", Dim::none, o.rel_tol) && !(o.rel_tol > 0.0)) b.error(b.path() + ".rel_tol: must be positive");
  b.boolean("warm_start", o.warm_start);
  b.finish();
}

void read_kappa_scan(Block b, KappaScanBlock& k) {
  b.range("Phi_range", Dim::rate, k.Phi_range);
  b.range("T_range", Dim::temperature, k.T_range);
  b.count("Phi_count", k.Phi_count);
  b.count("T_count", k.T_count);
  b.range("cut_bracket_kBT", Dim::none, k.cut_bracket_kT);
  b.number("group_high", Dim::none, k.group_high);
  b.number("group_low", Dim::none, k.group_low);
  if (auto pairs = b.raw("pairs")) {
    if (!pairs->IsSequence()) {
      b.error(b.path() + ".pairs: expected a list of {Phi_per_s, T_K} entries");
    } else {
      k.pairs.clear();
      std::size_t n = 0;
      for (const auto& entry : *pairs) {
        Block e = b.item(entry, b.path() + ".pairs[" + std::to_string(n++) + "]");
        double Phi = 0.0, T = 0.0;
        const bool ok = e.number("Phi", Dim::rate, Phi, true) & e.number("T", Dim::temperature, T, true);
        e.finish();
        if (ok) k.pairs.emplace_back(Phi, T);
      }
    }
  }
  if (k.pairs.empty() && (k.Phi_count < 2 || k.T_count < 2)) {
    b.error(b.path() + ": Phi_count and T_count must be at least 2");
  }
  if (!(k.group_high < k.group_low)) b.error(b.path() + ": group_high must be below group_low");
  b.finish();
}

void read_sources(Block b, SourcesBlock& s) {
  b.text("catalog", s.catalog);
  b.number("threshold", Dim::rate, s.threshold);
  b.finish();
}

void read_output(Block b, RunConfig& cfg) {
  b.text("directory", cfg.output.directory);
  b.number("sample_interval", Dim::time, cfg.scenario.integrator.sample_interval);
  b.numbers("snapshot_times", Dim::time, cfg.scenario.integrator.snapshot_times);
  if (auto f = b.raw("formats")) {
    if (!f->IsSequence()) {
      b.error(b.path() + ".formats: expected a list such as [csv, json]");
    } else {
      cfg.output.csv = cfg.output.json = false;
      for (const auto& item : *f) {
        const std::string name = item.IsScalar() ? item.as<std::string>() : "";
        if (name == "csv") {
          cfg.output.csv = true;
        } else if (name == "json") {
          cfg.output.json = true;
        } else {
          b.error(b.path() + ".formats: unknown format '" + name + "'");
        }
      }
      if (!cfg.output.csv && !cfg.output.json) b.error(b.path() + ".formats: need at least one format");
    }
  }
  b.finish();
}

RunConfig build(const YAML::Node& root) {
  Errors errs;
  RunConfig cfg;
  if (root && !root.IsNull() && !root.IsMap()) throw ConfigError({"config: top level must be a mapping"});
  Block top(root, "", errs);

  Block exp = top.child("experiment", true);
  std::string mode;
  if (exp.text("mode", mode, exp.present())) {
    if (!run_mode_from_string(mode, cfg.mode)) {
      errs.push_back("experiment.mode: '" + mode + "' is not one of simulate, sweep, optimize-cut, kappa-scan, sources");
    }
  }
  const bool needs_pump = cfg.mode != RunMode::sources;
  read_sweep(exp.child("sweep", cfg.mode == RunMode::sweep && exp.present()), cfg.sweep, cfg.mode == RunMode::sweep);
  read_optimize(exp.child("optimize"), cfg.optimize);
  read_kappa_scan(exp.child("kappa_scan"), cfg.kappa_scan);
  read_sources(exp.child("sources"), cfg.sources);
  exp.finish();

  read_trap(top.child("trap", true), cfg.scenario.trap);
  read_pump(top.child("pump", needs_pump), cfg.scenario, needs_pump);
  read_initial(top.child("initial"), cfg.scenario);
  read_grid(top.child("grid"), cfg.scenario);
  read_integrator(top.child("integrator"), cfg.scenario);
  read_processes(top.child("processes"), cfg.scenario.integrator.toggles);
  read_output(top.child("output"), cfg);
  top.finish();

  if (errs.empty()) {
    try {
      cfg.scenario.validate();
    } catch (const std::exception& e) {
      errs.emplace_back(e.what());
    }
  }
  if (!errs.empty()) throw ConfigError(std::move(errs));
  return cfg;
}

void apply_override(YAML::Node& root, const Override& o) {
  std::vector<std::string> parts;
  std::stringstream ss(o.key);
  for (std::string p; std::getline(ss, p, '.');) {
    if (p.empty()) throw ConfigError({"override '" + o.key + "': empty path component"});
    parts.push_back(p);
  }
  if (parts.empty()) throw ConfigError({"override: empty key"});
  if (!root || root.IsNull()) root = YAML::Node(YAML::NodeType::Map);
  YAML::Node node = root;
  for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
    if (!node.IsMap()) throw ConfigError({"override '" + o.key + "': '" + parts[i] + "' is not a block"});
    YAML::Node next = node[parts[i]];
    if (!next || next.IsNull()) {
      node[parts[i]] = YAML::Node(YAML::NodeType::Map);
      next = node[parts[i]];
    }
    node.reset(next);
  }
  if (!node.IsMap()) throw ConfigError({"override '" + o.key + "': parent is not a block"});
  // A quantity given with another unit is replaced rather than reported as duplicated.
  const std::string& leaf = parts.back();
  std::string base;
  for (const auto& u : all_suffixes()) {
    const std::string tail = "_" + u;
    if (leaf.size() > tail.size() && leaf.compare(leaf.size() - tail.size(), tail.size(), tail) == 0 &&
        leaf.size() - tail.size() < (base.empty() ? leaf.size() : base.size())) {
      base = leaf.substr(0, leaf.size() - tail.size());
    }
  }
  if (!base.empty()) {
    std::vector<std::string> drop;
    for (const auto& kv : node) {
      const std::string k = kv.first.as<std::string>();
      if (k != leaf && k.size() > base.size() + 1 && k.compare(0, base.size() + 1, base + "_") == 0 &&
          is_known_suffix(k.substr(base.size() + 1))) {
        drop.push_back(k);
      }
    }
    for (const auto& k : drop) node.remove(k);
  }
  try {
    node[leaf] = YAML::Load(o.value);
  } catch (const YAML::Exception& e) {
    throw ConfigError({"override '" + o.key + "': cannot parse value '" + o.value + "'"});
  }
}

std::string num(double v) {
  std::array<char, 64> buf{};
  auto r = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), r.ptr);
}

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string list(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + num(v[i]);
  return s + "]";
}

std::string list(std::pair<double, double> p) { return list(std::vector<double>{p.first, p.second}); }

const char* yes(bool b) { return b ? "true" : "false"; }

}  // namespace

std::string to_string(RunMode m) {
  switch (m) {
    case RunMode::simulate: return "simulate";
    case RunMode::sweep: return "sweep";
    case RunMode::optimize_cut: return "optimize-cut";
    case RunMode::kappa_scan: return "kappa-scan";
    case RunMode::sources: return "sources";
  }
  return "?";
}

bool run_mode_from_string(const std::string& s, RunMode& out) {
  for (RunMode m : {RunMode::simulate, RunMode::sweep, RunMode::optimize_cut, RunMode::kappa_scan, RunMode::sources}) {
    std::string name = to_string(m);
    std::string alt = name;
    for (char& c : alt) {
      if (c == '-') c = '_';
    }
    if (s == name || s == alt) {
      out = m;
      return true;
    }
  }
  return false;
}

namespace {
std::string join(const std::vector<std::string>& errors) {
  std::string s = "invalid config:";
  for (const auto& e : errors) s += "\n  " + e;
  return s;
}
}  // namespace

ConfigError::ConfigError(std::vector<std::string> errors) : std::runtime_error(join(errors)), errors_(std::move(errors)) {}

Override parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError({"override '" + text + "': expected key=value"});
  return {text.substr(0, eq), text.substr(eq + 1)};
}

RunConfig parse_config_text(const std::string& text, const std::vector<Override>& overrides) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError({std::string("config: YAML syntax error: ") + e.what()});
  }
  for (const auto& o : overrides) apply_override(root, o);
  return build(root);
}

RunConfig parse_config_file(const std::string& path, const std::vector<Override>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError({"config: cannot open '" + path + "'"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), overrides);
}

std::string emit_config(const RunConfig& cfg) {
  const Scenario& sc = cfg.scenario;
  const IntegratorConfig& ic = sc.integrator;
  std::ostringstream o;
  o << "trap:\n"
    << "  omega_r_rad_per_s: " << num(sc.trap.omega_r) << "\n"
    << "  omega_z_rad_per_s: " << num(sc.trap.omega_z) << "\n"
    << "  mass_kg: " << num(sc.trap.mass) << "\n"
    << "  scattering_length_m: " << num(sc.trap.scattering_length) << "\n"
    << "  L3_m6_per_s: " << num(sc.trap.L3) << "\n";
  o << "pump:\n"
    << "  Phi_per_s: " << num(sc.Phi) << "\n"
    << "  T_K: " << num(sc.T) << "\n"
    << "  gamma_per_s: " << num(sc.gamma) << "\n";
  if (sc.eps_cut_J > 0.0) {
    o << "  eps_cut_J: " << num(sc.eps_cut_J) << "\n";
  } else {
    o << "  eps_cut_kBT: " << num(sc.eps_cut_kT) << "\n";
  }
  o << "  N_source_atoms: " << num(sc.N_source) << "\n";
  o << "initial:\n"
    << "  N_initial_atoms: " << num(sc.N_initial) << "\n"
    << "  N0_seed_atoms: " << num(sc.N0_seed) << "\n"
    << "  N0_floor_atoms: " << num(sc.N0_floor) << "\n";
  o << "grid:\n  nodes: " << sc.grid_nodes << "\n";
  o << "integrator:\n"
    << "  rtol: " << num(ic.rtol) << "\n"
    << "  atol_N0_atoms: " << num(ic.atol_N0) << "\n"
    << "  atol_g: " << num(ic.atol_g) << "\n"
    << "  dt_init_s: " << num(ic.dt_init) << "\n"
    << "  dt_max_s: " << num(ic.dt_max) << "\n"
    << "  dt_min_s: " << num(ic.dt_min) << "\n"
    << "  steady_window_s: " << num(ic.steady_window) << "\n"
    << "  steady_frac: " << num(ic.steady_frac) << "\n"
    << "  steady_abs_atoms: " << num(ic.steady_abs) << "\n"
    << "  steady_balance: " << num(ic.steady_balance) << "\n"
    << "  max_steps: " << ic.max_steps << "\n"
    << "  t_max_s: " << num(sc.t_max) << "\n";
  const ProcessToggles& p = ic.toggles;
  o << "processes:\n"
    << "  thermal_thermal: " << yes(p.thermal_thermal) << "\n"
    << "  thermal_condensate: " << yes(p.thermal_condensate) << "\n"
    << "  three_body: " << yes(p.three_body) << "\n"
    << "  replenishment: " << yes(p.replenishment) << "\n"
    << "  redistribution: " << yes(p.redistribution) << "\n"
    << "  outcoupling: " << yes(p.outcoupling) << "\n";
  o << "experiment:\n  mode: " << to_string(cfg.mode) << "\n";
  const SweepBlock& s = cfg.sweep;
  o << "  sweep:\n    variable: " << to_string(s.variable) << "\n";
  if (!s.values.empty()) {
    const char* key = "values_per_s";
    if (s.variable == SweepVariable::T) key = "values_K";
    if (s.variable == SweepVariable::eps_cut) key = s.cut_in_kT ? "values_kBT" : "values_J";
    o << "    " << key << ": " << list(s.values) << "\n";
  }
  o << "    three_body: " << yes(s.three_body) << "\n    warm_start: " << yes(s.warm_start) << "\n";
  const OptimizeBlock& op = cfg.optimize;
  o << "  optimize:\n"
    << "    " << (op.bracket_in_J ? "bracket_J" : "bracket_kBT") << ": " << list(op.bracket) << "\n"
    << "    prescan: " << op.prescan << "\n"
    << "    rel_tol: " << num(op.rel_tol) << "\n"
    << "    warm_start: " << yes(op.warm_start) << "\n";
  const KappaScanBlock& k = cfg.kappa_scan;
  o << "  kappa_scan:\n"
    << "    Phi_range_per_s: " << list(k.Phi_range) << "\n"
    << "    T_range_K: " << list(k.T_range) << "\n"
    << "    Phi_count: " << k.Phi_count << "\n"
    << "    T_count: " << k.T_count << "\n";
  if (!k.pairs.empty()) {
    o << "    pairs:\n";
    for (const auto& [Phi, T] : k.pairs) o << "      - {Phi_per_s: " << num(Phi) << ", T_K: " << num(T) << "}\n";
  }
  o << "    cut_bracket_kBT: " << list(k.cut_bracket_kT) << "\n"
    << "    group_high: " << num(k.group_high) << "\n"
    << "    group_low: " << num(k.group_low) << "\n";
  o << "  sources:\n";
  if (!cfg.sources.catalog.empty()) o << "    catalog: " << quoted(cfg.sources.catalog) << "\n";
  o << "    threshold_per_s: " << num(cfg.sources.threshold) << "\n";
  o << "output:\n"
    << "  directory: " << quoted(cfg.output.directory) << "\n"
    << "  sample_interval_s: " << num(ic.sample_interval) << "\n"
    << "  snapshot_times_s: " << list(ic.snapshot_times) << "\n"
    << "  formats: [";
  if (cfg.output.csv) o << "csv" << (cfg.output.json ? ", " : "");
  if (cfg.output.json) o << "json";
  o << "]\n";
  return o.str();
}

std::string config_hash(const RunConfig& cfg) {
  const std::string text = emit_config(cfg);
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), md.data(), &len, EVP_sha256(), nullptr);
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 0xf];
  }
  return out;
}

}  // namespace qkt::io
