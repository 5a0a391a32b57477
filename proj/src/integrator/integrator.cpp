#include "qkt/integrator/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <sstream>

#include "qkt/physics/bose.hpp"
#include "qkt/physics/constants.hpp"
#include "qkt/physics/thomas_fermi.hpp"

namespace qkt {

void IntegratorConfig::validate() const {
  auto check = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("integrator: ") + name + " must be positive");
  };
  check(rtol, "rtol");
  check(atol_N0, "atol_N0");
  check(atol_g, "atol_g");
  check(dt_init, "dt_init");
  check(dt_max, "dt_max");
  check(dt_min, "dt_min");
  check(steady_window, "steady_window");
  check(steady_frac, "steady_frac");
  check(steady_abs, "steady_abs");
  check(steady_balance, "steady_balance");
  check(sample_interval, "sample_interval");
  if (!(condensate_floor >= 0.0)) throw std::invalid_argument("integrator: condensate_floor must be >= 0");
}

ButcherTableau ButcherTableau::dormand_prince() {
  ButcherTableau t;
  t.stages = 7;
  t.order = 5;
  t.fsal = true;
  t.c = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
  t.a = {{},
         {1.0 / 5},
         {3.0 / 40, 9.0 / 40},
         {44.0 / 45, -56.0 / 15, 32.0 / 9},
         {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
         {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
         {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
  t.b = {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84, 0.0};
  t.b_err = {5179.0 / 57600, 0.0, 7571.0 / 16695, 393.0 / 640, -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};
  return t;
}

ButcherTableau ButcherTableau::cash_karp() {
  ButcherTableau t;
  t.stages = 6;
  t.order = 5;
  t.fsal = false;
  t.c = {0.0, 1.0 / 5, 3.0 / 10, 3.0 / 5, 1.0, 7.0 / 8};
  t.a = {{},
         {1.0 / 5},
         {3.0 / 40, 9.0 / 40},
         {3.0 / 10, -9.0 / 10, 6.0 / 5},
         {-11.0 / 54, 5.0 / 2, -70.0 / 27, 35.0 / 27},
         {1631.0 / 55296, 175.0 / 512, 575.0 / 13824, 44275.0 / 110592, 253.0 / 4096}};
  t.b = {37.0 / 378, 0.0, 250.0 / 621, 125.0 / 594, 0.0, 512.0 / 1771};
  t.b_err = {2825.0 / 27648, 0.0, 18575.0 / 48384, 13525.0 / 55296, 277.0 / 14336, 1.0 / 4};
  return t;
}

namespace {

// Per-evaluation number fluxes, atoms/s.
struct Tally {
  double source = 0.0;
  double above_cut = 0.0;
  double delivered = 0.0;
  double evaporated = 0.0;
  double three_body = 0.0;
  double outcoupled = 0.0;
  double condensed = 0.0;
  double seeded = 0.0;
};

// Packed state: x[0] = N0, x[1 + i] = rho_i g_i with rho per hbar*omega_bar.
class Engine {
 public:
  Engine(std::shared_ptr<const EnergyGrid> grid, const PumpParams& pump, const TrapSpecies& ts,
         const IntegratorConfig& cfg, const ButcherTableau& tab)
      : grid_(std::move(grid)), pump_(pump), ts_(ts), cfg_(cfg), tab_(tab) {
    E_ = ts_.energy_unit();
    const std::size_t n = grid_->size();
    eps_.resize(n);
    w_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      eps_[i] = grid_->node(i) / E_;
      w_[i] = grid_->weight(i) / E_;
    }
  }

  std::size_t dim() const { return eps_.size() + 1; }

  std::vector<double> pack(const SystemState& s) const {
    std::vector<double> x(dim(), 0.0);
    x[0] = s.condensate.N0;
    for (std::size_t i = 0; i < eps_.size(); ++i) x[i + 1] = s.thermal.rho_bar[i] * E_ * s.thermal.g[i];
    return x;
  }

  SystemState unpack(double t, const std::vector<double>& x) const {
    std::vector<double> rho_g(eps_.size());
    for (std::size_t i = 0; i < eps_.size(); ++i) rho_g[i] = x[i + 1] / E_;
    return SystemState::from_populations(t, std::max(x[0], 0.0), grid_, rho_g, ts_);
  }

  KineticView view(const std::vector<double>& x) const {
    KineticView v;
    v.energy_unit = E_;
    v.N0 = std::max(x[0], 0.0);
    const double mu_J = tf_chemical_potential(v.N0, ts_);
    v.mu = mu_J / E_;
    v.spacing = grid_->spacing() / E_;
    v.top = active_top_index(*grid_, mu_J);
    v.eps = eps_;
    v.w = w_;
    const std::size_t n = eps_.size();
    v.rho.resize(n);
    v.g.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      v.rho[i] = scaled::shifted_dos(eps_[i], v.mu);
      if (i > 0 && static_cast<long>(i) <= v.top && v.rho[i] > 0.0) v.g[i] = x[i + 1] / v.rho[i];
    }
    return v;
  }

  std::vector<double> rhs(const std::vector<double>& x, Tally& tally, ProcessRates* keep = nullptr) const {
    const KineticView v = view(x);
    ProcessRates r = assemble_rhs(v, pump_, ts_, cfg_.toggles);
    std::vector<double> dx(dim(), 0.0);
    dx[0] = r.dN0_dt.total();
    tally.seeded = 0.0;
    // At the floor the drain is refilled as it happens, so N0 and mu stand still and the
    // thermal window must not be shifted by the drain.
    if (cfg_.condensate_floor > 0.0 && x[0] <= cfg_.condensate_floor && dx[0] < 0.0) {
      tally.seeded = -dx[0];
      dx[0] = 0.0;
      r.dmu_dt = 0.0;
      std::fill(r.d_rho_g_dt.redistribution.begin(), r.d_rho_g_dt.redistribution.end(), 0.0);
      r.evaporated.redistribution = 0.0;
    }
    const auto node = r.total_node_rate();
    for (std::size_t i = 0; i < node.size(); ++i) dx[i + 1] = node[i];
    tally.source = cfg_.toggles.replenishment ? pump_.Phi : 0.0;
    tally.above_cut = r.evaporated.replenishment;
    tally.delivered = r.replenishment_delivered;
    tally.evaporated = r.evaporated.thermal_thermal + r.evaporated.thermal_condensate + r.evaporated.redistribution;
    tally.three_body = -(r.dN0_dt.three_body + r.three_body_thermal_loss);
    tally.outcoupled = -r.dN0_dt.outcoupling;
    tally.condensed = r.dN0_dt.thermal_condensate;
    if (keep) *keep = std::move(r);
    return dx;
  }

  struct Attempt {
    std::vector<double> x;
    std::vector<double> k_last;
    Tally last_tally;
    double err = 0.0;
    NumberLedger ledger;
  };

  Attempt attempt(const std::vector<double>& x0, const std::vector<double>& k1, const Tally& t1, double dt) const {
    const int S = tab_.stages;
    std::vector<std::vector<double>> k(static_cast<std::size_t>(S));
    std::vector<Tally> tallies(static_cast<std::size_t>(S));
    k[0] = k1;
    tallies[0] = t1;
    const std::size_t d = dim();
    std::vector<double> xs(d);
    for (int s = 1; s < S; ++s) {
      xs = x0;
      const auto& row = tab_.a[static_cast<std::size_t>(s)];
      for (std::size_t r = 0; r < row.size(); ++r) {
        if (row[r] == 0.0) continue;
        const double f = dt * row[r];
        const auto& kr = k[r];
        for (std::size_t q = 0; q < d; ++q) xs[q] += f * kr[q];
      }
      k[static_cast<std::size_t>(s)] = rhs(xs, tallies[static_cast<std::size_t>(s)]);
    }
    Attempt out;
    out.x = x0;
    std::vector<double> xe = x0;
    for (int s = 0; s < S; ++s) {
      const auto us = static_cast<std::size_t>(s);
      const double fb = dt * tab_.b[us], fe = dt * tab_.b_err[us];
      for (std::size_t q = 0; q < d; ++q) {
        out.x[q] += fb * k[us][q];
        xe[q] += fe * k[us][q];
      }
      const Tally& ta = tallies[us];
      auto& L = out.ledger;
      L.source_total += fb * ta.source;
      L.source_above_cut += fb * ta.above_cut;
      L.replenished += fb * ta.delivered;
      L.evaporated += fb * ta.evaporated;
      L.three_body += fb * ta.three_body;
      L.outcoupled += fb * ta.outcoupled;
      L.condensed += fb * ta.condensed;
      L.seeded += fb * ta.seeded;
    }
    if (tab_.fsal) {
      out.k_last = k.back();
      out.last_tally = tallies.back();
    }
    out.err = error_norm(x0, out.x, xe);
    return out;
  }

  double error_norm(const std::vector<double>& x0, const std::vector<double>& x, const std::vector<double>& xe) const {
    const double N0 = std::max(x[0], 0.0);
    const double mu = tf_chemical_potential(N0, ts_) / E_;
    const long top = std::max(active_top_index(*grid_, std::max(mu, 0.0) * E_),
                              active_top_index(*grid_, tf_chemical_potential(std::max(x0[0], 0.0), ts_)));
    double sum = 0.0;
    std::size_t count = 0;
    {
      const double sc = cfg_.atol_N0 + cfg_.rtol * std::max(std::abs(x[0]), std::abs(x0[0]));
      const double e = (x[0] - xe[0]) / sc;
      sum += e * e;
      ++count;
    }
    for (long i = 1; i <= top; ++i) {
      const auto q = static_cast<std::size_t>(i + 1);
      const double rho = scaled::shifted_dos(eps_[static_cast<std::size_t>(i)], mu);
      const double sc = cfg_.atol_g * rho + cfg_.rtol * std::max(std::abs(x[q]), std::abs(x0[q]));
      if (!(sc > 0.0)) continue;
      const double e = (x[q] - xe[q]) / sc;
      sum += e * e;
      ++count;
    }
    const double r = std::sqrt(sum / static_cast<double>(count));
    return std::isfinite(r) ? r : 1e300;
  }

  // Truncate at the new window and clamp negative populations. Returns true if x changed.
  bool enforce(std::vector<double>& x, NumberLedger& ledger) const {
    bool changed = false;
    if (x[0] < 0.0) {
      ledger.evaporated += x[0];
      x[0] = 0.0;
      changed = true;
    }
    if (x[0] < cfg_.condensate_floor) {
      ledger.seeded += cfg_.condensate_floor - x[0];
      x[0] = cfg_.condensate_floor;
      changed = true;
    }
    const long top = active_top_index(*grid_, tf_chemical_potential(x[0], ts_));
    for (std::size_t i = 0; i < eps_.size(); ++i) {
      double& y = x[i + 1];
      if (y == 0.0) continue;
      if (i == 0 || static_cast<long>(i) > top || y < 0.0) {
        ledger.evaporated += w_[i] * y;
        y = 0.0;
        changed = true;
      }
    }
    return changed;
  }

  double grow_factor(double err, bool after_reject) const {
    const double expo = 1.0 / static_cast<double>(tab_.order);
    double f = err > 0.0 ? 0.9 * std::pow(err, -expo) : 5.0;
    f = std::clamp(f, 0.2, after_reject ? 1.0 : 5.0);
    return f;
  }

  const EnergyGrid& grid() const { return *grid_; }
  const IntegratorConfig& cfg() const { return cfg_; }
  const ButcherTableau& tableau() const { return tab_; }

 private:
  std::shared_ptr<const EnergyGrid> grid_;
  PumpParams pump_;
  TrapSpecies ts_;
  IntegratorConfig cfg_;
  ButcherTableau tab_;
  double E_ = 1.0;
  std::vector<double> eps_, w_;
};

void add_ledger(NumberLedger& a, const NumberLedger& b) {
  a.source_total += b.source_total;
  a.source_above_cut += b.source_above_cut;
  a.replenished += b.replenished;
  a.evaporated += b.evaporated;
  a.three_body += b.three_body;
  a.outcoupled += b.outcoupled;
  a.condensed += b.condensed;
  a.seeded += b.seeded;
}

std::string describe(const SystemState& s) {
  std::ostringstream os;
  os << "t=" << s.t << " s, N0=" << s.condensate.N0 << ", N_T=" << s.thermal_number()
     << ", mu=" << s.condensate.mu << " J";
  return os.str();
}

struct AcceptedStep {
  std::vector<double> x;
  double dt = 0.0;
  double err = 0.0;
  double dt_next = 0.0;
  int rejected = 0;
  NumberLedger ledger;
  std::vector<double> k_last;
  Tally last_tally;
  bool fsal_valid = false;
};

AcceptedStep advance(const Engine& eng, double t, const std::vector<double>& x, const std::vector<double>& k1,
                     const Tally& t1, double dt) {
  const auto& cfg = eng.cfg();
  AcceptedStep out;
  bool after_reject = false;
  while (true) {
    if (dt < cfg.dt_min) {
      std::ostringstream os;
      os << "step size underflow (dt=" << dt << " s) at t=" << t << " s";
      throw StiffnessFailure(os.str(), eng.unpack(t, x));
    }
    auto a = eng.attempt(x, k1, t1, dt);
    if (a.err <= 1.0) {
      out.x = std::move(a.x);
      out.dt = dt;
      out.err = a.err;
      out.dt_next = std::min(dt * eng.grow_factor(a.err, after_reject), cfg.dt_max);
      out.ledger = a.ledger;
      const bool changed = eng.enforce(out.x, out.ledger);
      out.fsal_valid = eng.tableau().fsal && !changed;
      if (out.fsal_valid) {
        out.k_last = std::move(a.k_last);
        out.last_tally = a.last_tally;
      }
      return out;
    }
    ++out.rejected;
    after_reject = true;
    dt *= eng.grow_factor(a.err, true);
  }
}

}  // namespace

StepResult step(const SystemState& state, const PumpParams& pump, const TrapSpecies& ts,
                const IntegratorConfig& cfg, double dt, const ButcherTableau& tableau) {
  cfg.validate();
  Engine eng(state.thermal.grid, pump, ts, cfg, tableau);
  auto x = eng.pack(state);
  Tally t1;
  const auto k1 = eng.rhs(x, t1);
  auto acc = advance(eng, state.t, x, k1, t1, std::min(dt, cfg.dt_max));
  StepResult r;
  r.state = eng.unpack(state.t + acc.dt, acc.x);
  r.dt_used = acc.dt;
  r.error = acc.err;
  r.dt_next = acc.dt_next;
  r.rejected = acc.rejected;
  r.ledger = acc.ledger;
  return r;
}

EvolveResult evolve(const SystemState& initial, const PumpParams& pump, const TrapSpecies& ts,
                    const IntegratorConfig& cfg, double t_max, const ButcherTableau& tableau) {
  cfg.validate();
  if (!(t_max > 0.0)) throw std::invalid_argument("evolve: t_max must be positive");
  Engine eng(initial.thermal.grid, pump, ts, cfg, tableau);
  EvolveResult res;

  std::vector<double> snaps = cfg.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  const double t0 = initial.t;
  const double t_end = t0 + t_max;

  auto x = eng.pack(initial);
  {
    NumberLedger dummy;
    eng.enforce(x, dummy);
    res.ledger.evaporated += dummy.evaporated;
  }
  SystemState current = eng.unpack(t0, x);

  auto sample = [&](const SystemState& s) {
    TrajectorySample p;
    p.t = s.t;
    p.N0 = s.condensate.N0;
    p.N_T = s.thermal_number();
    p.mu = s.condensate.mu;
    p.fraction = s.condensate_fraction();
    if (res.trajectory.samples.empty() || p.t > res.trajectory.samples.back().t) res.trajectory.samples.push_back(p);
  };
  auto snapshot = [&](const SystemState& s) {
    Snapshot sn;
    sn.t = s.t;
    sn.mu = s.condensate.mu;
    sn.eps_bar = s.thermal.grid->nodes();
    sn.rho_bar = s.thermal.rho_bar;
    sn.g = s.thermal.g;
    res.trajectory.snapshots.push_back(std::move(sn));
  };

  while (next_snap < snaps.size() && snaps[next_snap] <= t0) {
    snapshot(current);
    ++next_snap;
  }
  sample(current);
  double next_sample = t0 + cfg.sample_interval;

  struct Hist {
    double t, N0, NT, inflow;
  };
  std::deque<Hist> hist;
  hist.push_back({t0, current.condensate.N0, current.thermal_number(), res.ledger.replenished});

  Tally t1;
  std::vector<double> k1 = eng.rhs(x, t1);
  double t = t0;
  double dt = std::min(cfg.dt_init, cfg.dt_max);
  try {
    while (t < t_end) {
      if (res.steps >= cfg.max_steps) {
        res.failed = true;
        res.failure = "maximum step count reached";
        break;
      }
      double h = std::min(dt, t_end - t);
      if (next_snap < snaps.size()) h = std::min(h, snaps[next_snap] - t);
      const bool clipped = h < dt;
      auto acc = advance(eng, t, x, k1, t1, h);
      t = (h == t_end - t && acc.dt == h) ? t_end : t + acc.dt;
      x = std::move(acc.x);
      add_ledger(res.ledger, acc.ledger);
      ++res.steps;
      res.rejected += static_cast<std::size_t>(acc.rejected);
      dt = clipped && acc.rejected == 0 ? std::max(dt, acc.dt_next) : acc.dt_next;
      if (acc.fsal_valid) {
        k1 = std::move(acc.k_last);
        t1 = acc.last_tally;
      } else {
        k1 = eng.rhs(x, t1);
      }
      current = eng.unpack(t, x);
      while (next_snap < snaps.size() && snaps[next_snap] <= t * (1.0 + 1e-12)) {
        snapshot(current);
        ++next_snap;
      }
      if (t >= next_sample) {
        sample(current);
        while (next_sample <= t) next_sample += cfg.sample_interval;
      }

      const double N0 = current.condensate.N0, NT = current.thermal_number();
      hist.push_back({t, N0, NT, res.ledger.replenished});
      while (hist.size() > 2 && hist[1].t <= t - cfg.steady_window) hist.pop_front();
      if (t - hist.front().t >= cfg.steady_window) {
        // values one window back, interpolated
        const Hist& a = hist[0];
        const Hist& b = hist[1];
        const double tb = t - cfg.steady_window;
        const double f = b.t > a.t ? (tb - a.t) / (b.t - a.t) : 0.0;
        const double N0b = a.N0 + f * (b.N0 - a.N0);
        const double NTb = a.NT + f * (b.NT - a.NT);
        const double inflow = res.ledger.replenished - (a.inflow + f * (b.inflow - a.inflow));
        const double drift = std::abs((N0 + NT) - (N0b + NTb));
        const bool balanced = drift < cfg.steady_balance * inflow || drift < cfg.steady_abs;
        auto quiet = [&](double now, double before) {
          const double d = std::abs(now - before);
          return d < cfg.steady_frac * std::abs(now) || d < cfg.steady_abs;
        };
        if (quiet(N0, N0b) && quiet(NT, NTb) && balanced) {
          res.steady = true;
          res.time_to_steady = t - t0;
          break;
        }
      }
    }
  } catch (const StiffnessFailure& e) {
    res.failed = true;
    res.failure = std::string(e.what()) + "; " + describe(e.state());
  }
  sample(current);
  res.final_state = current;
  eng.rhs(x, t1, &res.final_rates);
  return res;
}

InitialState make_initial_state(double N_initial, double T, std::shared_ptr<const EnergyGrid> grid,
                                const TrapSpecies& ts, double N0_seed) {
  if (!(N_initial > 0.0) || !(T > 0.0)) throw std::invalid_argument("make_initial_state: N_initial and T must be positive");
  if (!grid) throw std::invalid_argument("make_initial_state: no grid");
  if (N0_seed < 0.0) throw std::invalid_argument("make_initial_state: negative condensate seed");
  InitialState init;
  const auto fug = solve_fugacity(N_initial, T, ts);
  init.fugacity = fug.z;
  init.critical = fug.critical;
  const double mu = tf_chemical_potential(N0_seed, ts);
  const long top = active_top_index(*grid, mu);
  std::vector<double> g(grid->size(), 0.0);
  const double kT = constants::k_B * T;
  for (long i = 1; i <= top; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    g[ui] = bose_occupation_fugacity(grid->node(ui) / kT, fug.z);
  }
  init.state = SystemState::from_occupation(0.0, N0_seed, std::move(grid), std::move(g), ts);
  return init;
}

SystemState regrid(const SystemState& state, std::shared_ptr<const EnergyGrid> grid, const TrapSpecies& ts) {
  const auto& old = *state.thermal.grid;
  const auto& og = state.thermal.g;
  std::vector<double> g(grid->size(), 0.0);
  const double h = old.spacing();
  for (std::size_t i = 1; i < grid->size(); ++i) {
    const double e = grid->node(i);
    if (e > old.eps_cut()) break;
    const double pos = e / h;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    if (lo + 1 >= old.size()) {
      g[i] = og[old.size() - 1];
      continue;
    }
    const double f = pos - static_cast<double>(lo);
    double glo = og[lo], ghi = og[lo + 1];
    // node 0 carries no occupation; extrapolate from above instead
    if (lo == 0 && lo + 2 < old.size()) glo = std::max(0.0, 2.0 * og[1] - og[2]);
    if (glo > 0.0 && ghi > 0.0) {
      g[i] = std::exp((1.0 - f) * std::log(glo) + f * std::log(ghi));
    } else {
      g[i] = (1.0 - f) * glo + f * ghi;
    }
  }
  SystemState out = SystemState::from_occupation(state.t, state.condensate.N0, std::move(grid), std::move(g), ts);
  return evaporation_enforcement(out);
}

}  // namespace qkt
