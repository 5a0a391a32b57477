#include "qkt/experiments/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

#include "qkt/physics/constants.hpp"

namespace qkt {

double compute_kappa(double Phi, double T, const TrapSpecies& ts) {
  if (!(Phi >= 0.0) || !(T > 0.0)) throw std::invalid_argument("compute_kappa: need Phi >= 0 and T > 0");
  const double r = ts.energy_unit() / (constants::k_B * T);
  return Phi * r * r * r;
}

double phase_space_density(double N, double T, const TrapSpecies& ts) {
  if (!(N >= 0.0) || !(T > 0.0)) throw std::invalid_argument("phase_space_density: need N >= 0 and T > 0");
  const double r = ts.energy_unit() / (constants::k_B * T);
  return N * r * r * r;
}

double Scenario::eps_cut() const {
  return eps_cut_J > 0.0 ? eps_cut_J : eps_cut_kT * constants::k_B * T;
}

PumpParams Scenario::pump() const {
  return PumpParams::from_source(Phi, T, N_source > 0.0 ? N_source : N_initial, gamma, eps_cut(), trap);
}

void Scenario::validate() const {
  trap.validate();
  if (!(Phi >= 0.0)) throw std::invalid_argument("scenario: Phi must be >= 0");
  if (!(T > 0.0)) throw std::invalid_argument("scenario: T must be positive");
  if (!(gamma >= 0.0)) throw std::invalid_argument("scenario: gamma must be >= 0");
  if (!(eps_cut() > 0.0)) throw std::invalid_argument("scenario: eps_cut must be positive");
  if (!(N_initial > 0.0)) throw std::invalid_argument("scenario: N_initial must be positive");
  if (N0_seed < 0.0 || N0_floor < 0.0) throw std::invalid_argument("scenario: negative condensate seed");
  if (grid_nodes < 8) throw std::invalid_argument("scenario: need at least 8 grid nodes");
  if (!(t_max > 0.0)) throw std::invalid_argument("scenario: t_max must be positive");
  integrator.validate();
}

namespace {

SteadyPoint describe_inputs(const Scenario& sc) {
  SteadyPoint p;
  p.Phi = sc.Phi;
  p.T = sc.T;
  p.eps_cut = sc.eps_cut();
  p.gamma = sc.gamma;
  p.kappa = compute_kappa(sc.Phi, sc.T, sc.trap);
  p.eps_cut_over_kT = p.eps_cut / (constants::k_B * sc.T);
  return p;
}

SteadyRun run_once(const Scenario& sc, const SystemState* warm) {
  auto grid = std::make_shared<const EnergyGrid>(EnergyGrid::uniform(sc.eps_cut(), sc.grid_nodes));
  SystemState init;
  if (warm) {
    init = regrid(*warm, grid, sc.trap);
    init.t = 0.0;
  } else {
    init = make_initial_state(sc.N_initial, sc.T, grid, sc.trap, sc.N0_seed).state;
  }
  IntegratorConfig cfg = sc.integrator;
  cfg.condensate_floor = sc.N0_floor;
  SteadyRun run;
  run.evolution = evolve(init, sc.pump(), sc.trap, cfg, sc.t_max);
  SteadyPoint& p = run.point;
  p = describe_inputs(sc);
  const auto& fs = run.evolution.final_state;
  p.N0 = fs.condensate.N0;
  p.N_T = fs.thermal_number();
  p.fraction = fs.condensate_fraction();
  p.mu = fs.condensate.mu;
  p.time_to_steady = run.evolution.steady ? run.evolution.time_to_steady : fs.t;
  p.effective_flux_below_cut = run.evolution.final_rates.replenishment_delivered;
  p.steady = run.evolution.steady;
  p.failed = run.evolution.failed;
  p.warm_started = warm != nullptr;
  if (p.failed) {
    p.message = run.evolution.failure;
  } else if (!p.steady) {
    p.message = "no steady state within t_max";
  }
  return run;
}

}  // namespace

SteadyRun solve_steady(const Scenario& sc, const SystemState* warm) {
  sc.validate();
  if (warm) {
    SteadyRun r = run_once(sc, warm);
    if (r.point.steady && !r.point.failed) return r;
  }
  return run_once(sc, nullptr);
}

std::string to_string(SweepVariable v) {
  switch (v) {
    case SweepVariable::Phi: return "Phi";
    case SweepVariable::T: return "T";
    case SweepVariable::eps_cut: return "eps_cut";
    case SweepVariable::gamma: return "gamma";
  }
  return "?";
}

std::optional<SweepVariable> sweep_variable_from_string(const std::string& s) {
  if (s == "Phi") return SweepVariable::Phi;
  if (s == "T") return SweepVariable::T;
  if (s == "eps_cut") return SweepVariable::eps_cut;
  if (s == "gamma") return SweepVariable::gamma;
  return std::nullopt;
}

void classify_monotonic(SweepResult& r, const std::vector<double>& inputs) {
  std::vector<std::size_t> order(inputs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return inputs[a] < inputs[b]; });
  r.non_decreasing = r.non_increasing = true;
  for (std::size_t k = 1; k < order.size(); ++k) {
    const double prev = r.points[order[k - 1]].N0, cur = r.points[order[k]].N0;
    const double scale = std::max(std::abs(prev), std::abs(cur));
    if (cur < prev - r.noise * scale) r.non_decreasing = false;
    if (cur > prev + r.noise * scale) r.non_increasing = false;
  }
}

SweepResult sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw std::invalid_argument("sweep: no values");
  for (double v : spec.values) {
    if (!(v > 0.0)) throw std::invalid_argument("sweep: values must be positive");
  }
  SweepResult res;
  res.points.resize(spec.values.size());
  std::vector<std::size_t> order(spec.values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return spec.values[a] < spec.values[b]; });

  std::optional<SystemState> previous;
  for (std::size_t idx : order) {
    Scenario sc = spec.base;
    sc.integrator.toggles.three_body = spec.three_body;
    const double v = spec.values[idx];
    switch (spec.varying) {
      case SweepVariable::Phi: sc.Phi = v; break;
      case SweepVariable::T: sc.T = v; break;
      case SweepVariable::gamma: sc.gamma = v; break;
      case SweepVariable::eps_cut:
        if (spec.cut_in_kT) {
          sc.eps_cut_J = 0.0;
          sc.eps_cut_kT = v;
        } else {
          sc.eps_cut_J = v;
        }
        break;
    }
    try {
      SteadyRun run = solve_steady(sc, spec.warm_start && previous ? &*previous : nullptr);
      res.points[idx] = run.point;
      if (run.point.steady) previous = run.evolution.final_state;
    } catch (const std::exception& e) {
      SteadyPoint p;
      p.failed = true;
      p.message = e.what();
      res.points[idx] = p;
    }
  }
  classify_monotonic(res, spec.values);
  return res;
}

MaximizeResult maximize_prescan_golden(const std::function<double(double)>& f, double lo, double hi, int prescan,
                                       double rel_tol) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("maximize: need 0 < lo < hi");
  if (prescan < 3) throw std::invalid_argument("maximize: pre-scan needs at least 3 points");
  MaximizeResult r;
  auto eval = [&](double x) {
    const double v = f(x);
    r.evaluations.emplace_back(x, v);
    return v;
  };
  std::vector<double> xs(static_cast<std::size_t>(prescan)), fs(xs.size());
  for (int k = 0; k < prescan; ++k) {
    xs[static_cast<std::size_t>(k)] = lo * std::pow(hi / lo, static_cast<double>(k) / (prescan - 1));
    fs[static_cast<std::size_t>(k)] = eval(xs[static_cast<std::size_t>(k)]);
  }
  const auto b = static_cast<std::size_t>(std::max_element(fs.begin(), fs.end()) - fs.begin());
  r.x = xs[b];
  r.f = fs[b];
  const bool flat = *std::min_element(fs.begin(), fs.end()) == fs[b];
  if (b == 0 || b + 1 == xs.size() || flat) {
    r.interior_max = false;
    return r;
  }
  r.interior_max = true;

  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = xs[b - 1], d = xs[b + 1];
  double x1 = d - invphi * (d - a), x2 = a + invphi * (d - a);
  double f1 = eval(x1), f2 = eval(x2);
  while ((d - a) > rel_tol * 0.5 * (a + d)) {
    if (f1 >= f2) {
      d = x2;
      x2 = x1;
      f2 = f1;
      x1 = d - invphi * (d - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (d - a);
      f2 = eval(x2);
    }
  }
  // Parabolic vertex through the two interior points and the better bracket end.
  const double xa = x1, xb = x2;
  const double xc = (f1 >= f2) ? a : d;
  const double fa = f1, fb = f2;
  double fc = -INFINITY;
  for (const auto& [x, v] : r.evaluations) {
    if (x == xc) fc = v;
  }
  if (std::isfinite(fc)) {
    const double num = (xb - xa) * (xb - xa) * (fb - fc) - (xb - xc) * (xb - xc) * (fb - fa);
    const double den = (xb - xa) * (fb - fc) - (xb - xc) * (fb - fa);
    if (den != 0.0) {
      const double xv = xb - 0.5 * num / den;
      if (xv > a && xv < d) eval(xv);
    }
  }
  for (const auto& [x, v] : r.evaluations) {
    if (v > r.f) {
      r.f = v;
      r.x = x;
    }
  }
  return r;
}

CutOptimum optimize_eps_cut(const Scenario& base, std::pair<double, double> bracket, const OptimizeOptions& opt) {
  CutOptimum out;
  std::map<double, SystemState> finals;
  std::map<double, SteadyPoint> points;
  auto f = [&](double cut) {
    Scenario sc = base;
    sc.eps_cut_J = cut;
    const SystemState* warm = nullptr;
    if (opt.warm_start && !finals.empty()) {
      auto it = finals.lower_bound(cut);
      if (it == finals.end() || (it != finals.begin() && std::abs(std::prev(it)->first - cut) < std::abs(it->first - cut))) {
        it = std::prev(it);
      }
      warm = &it->second;
    }
    SteadyRun run = solve_steady(sc, warm);
    out.evaluations.push_back(run.point);
    points[cut] = run.point;
    if (run.point.steady) finals[cut] = run.evolution.final_state;
    return run.point.failed ? -1.0 : run.point.N0;
  };
  const MaximizeResult m = maximize_prescan_golden(f, bracket.first, bracket.second, opt.prescan, opt.rel_tol);
  out.eps_cut = m.x;
  out.N0 = m.f;
  out.interior_max = m.interior_max;
  out.best = points[m.x];
  return out;
}

std::string to_string(KappaGroup g) {
  switch (g) {
    case KappaGroup::high_T: return "high_T";
    case KappaGroup::marginal: return "marginal";
    case KappaGroup::low_T: return "low_T";
  }
  return "?";
}

KappaGroup classify_group(double r, const GroupThresholds& th) {
  if (r < th.high) return KappaGroup::high_T;
  if (r < th.low) return KappaGroup::marginal;
  return KappaGroup::low_T;
}

std::vector<ScanPoint> kappa_scan(const KappaScanSpec& spec) {
  std::vector<std::pair<double, double>> pairs = spec.pairs;
  if (pairs.empty()) {
    if (spec.Phi_count < 2 || spec.T_count < 2) throw std::invalid_argument("kappa_scan: counts must be >= 2");
    auto logspace = [](std::pair<double, double> r, std::size_t n, std::size_t k) {
      return r.first * std::pow(r.second / r.first, static_cast<double>(k) / static_cast<double>(n - 1));
    };
    for (std::size_t a = 0; a < spec.Phi_count; ++a) {
      for (std::size_t b = 0; b < spec.T_count; ++b) {
        pairs.emplace_back(logspace(spec.Phi_range, spec.Phi_count, a), logspace(spec.T_range, spec.T_count, b));
      }
    }
  }
  for (const auto& [Phi, T] : pairs) {
    if (!(Phi > 0.0) || !(T > 0.0)) throw std::invalid_argument("kappa_scan: ranges must be positive");
  }
  std::function<ScanPoint(std::size_t)> job = [&](std::size_t i) {
    Scenario sc = spec.base;
    sc.Phi = pairs[i].first;
    sc.T = pairs[i].second;
    const double kT = constants::k_B * sc.T;
    ScanPoint sp;
    try {
      CutOptimum opt = optimize_eps_cut(sc, {spec.cut_bracket_kT.first * kT, spec.cut_bracket_kT.second * kT}, spec.optimize);
      sp.point = opt.best;
      sp.interior_max = opt.interior_max;
      sp.evaluations = std::move(opt.evaluations);
    } catch (const std::exception& e) {
      sp.point.Phi = sc.Phi;
      sp.point.T = sc.T;
      sp.point.kappa = compute_kappa(sc.Phi, sc.T, sc.trap);
      sp.point.failed = true;
      sp.point.message = e.what();
    }
    sp.group = classify_group(sp.point.eps_cut_over_kT, spec.thresholds);
    return sp;
  };
  return parallel_map<ScanPoint>(pairs.size(), spec.workers, job);
}

std::vector<SourceVerdict> evaluate_sources(const std::vector<SourceEntry>& catalog, const TrapSpecies& ts,
                                            double threshold) {
  std::vector<SourceVerdict> out;
  for (const auto& s : catalog) {
    if (!(s.Phi > 0.0) || !(s.T > 0.0)) throw std::invalid_argument("source '" + s.name + "': Phi and T must be positive");
    SourceVerdict v;
    v.source = s;
    v.kappa = compute_kappa(s.Phi, s.T, ts);
    v.above_threshold = v.kappa >= threshold;
    v.passes = v.above_threshold && !s.comparison_only;
    out.push_back(v);
  }
  return out;
}

}  // namespace qkt
