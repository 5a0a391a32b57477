#include <doctest.h>

#include <cmath>
#include <numeric>

#include "../support/oracles.hpp"
#include "qkt/integrator/integrator.hpp"
#include "qkt/kinetics/terms.hpp"
#include "qkt/physics/constants.hpp"

using namespace qkt;

namespace {
const TrapSpecies ts = TrapSpecies::rb87_reference();
const double kT = constants::k_B * 540e-9;

std::shared_ptr<const EnergyGrid> grid(double cut_kT, std::size_t n) {
  return std::make_shared<const EnergyGrid>(EnergyGrid::uniform(cut_kT * kT, n));
}

PumpParams reference_pump(double cut_kT = 3.0) { return PumpParams::from_source(8.4e5, 540e-9, 4.2e6, 0.3, cut_kT * kT, ts); }

// condensate only, empty thermal cloud
SystemState bare_condensate(double N0) {
  auto gr = grid(3.0, 40);
  return SystemState::from_occupation(0.0, N0, gr, std::vector<double>(gr->size(), 0.0), ts);
}
}  // namespace

TEST_CASE("tableaux: consistency and order conditions") {
  for (const auto& t : {ButcherTableau::dormand_prince(), ButcherTableau::cash_karp()}) {
    CHECK(t.a.size() == static_cast<std::size_t>(t.stages));
    CHECK(std::accumulate(t.b.begin(), t.b.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(std::accumulate(t.b_err.begin(), t.b_err.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    for (int s = 0; s < t.stages; ++s) {
      const auto& row = t.a[static_cast<std::size_t>(s)];
      CHECK(std::accumulate(row.begin(), row.end(), 0.0) == doctest::Approx(t.c[static_cast<std::size_t>(s)]).epsilon(1e-14));
    }
    double bc = 0.0, bc2 = 0.0, bc3 = 0.0;
    for (int s = 0; s < t.stages; ++s) {
      const double c = t.c[static_cast<std::size_t>(s)], b = t.b[static_cast<std::size_t>(s)];
      bc += b * c;
      bc2 += b * c * c;
      bc3 += b * c * c * c;
    }
    CHECK(bc == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(bc2 == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    CHECK(bc3 == doctest::Approx(0.25).epsilon(1e-14));
  }
  CHECK(ButcherTableau::dormand_prince().fsal);
}

TEST_CASE("integrator: pure outcoupling follows the exponential") {
  IntegratorConfig cfg;
  cfg.toggles = ProcessToggles::none();
  cfg.toggles.outcoupling = true;
  cfg.rtol = 1e-9;
  cfg.atol_N0 = 1e-6;
  cfg.steady_window = 1e9;
  cfg.sample_interval = 1.0;
  PumpParams pump = reference_pump();
  for (const auto& tab : {ButcherTableau::dormand_prince(), ButcherTableau::cash_karp()}) {
    const auto r = evolve(bare_condensate(4e5), pump, ts, cfg, 10.0, tab);
    REQUIRE_FALSE(r.failed);
    for (const auto& s : r.trajectory.samples) {
      CHECK(std::abs(s.N0 / (4e5 * std::exp(-0.3 * s.t)) - 1.0) < 1e-6);
    }
    CHECK(r.final_state.t == doctest::Approx(10.0));
    CHECK(r.ledger.outcoupled == doctest::Approx(4e5 * (1.0 - std::exp(-3.0))).epsilon(1e-6));
  }
}

TEST_CASE("integrator: pure three-body decay follows the closed form") {
  TrapSpecies lossy = ts;
  lossy.L3 *= 200.0;
  IntegratorConfig cfg;
  cfg.toggles = ProcessToggles::none();
  cfg.toggles.three_body = true;
  cfg.rtol = 1e-9;
  cfg.atol_N0 = 1e-6;
  cfg.steady_window = 1e9;
  cfg.sample_interval = 0.5;
  const double N0 = 2e6;
  const double C = -three_body_condensate_closed_form(N0, lossy) / std::pow(N0, 1.8);
  const auto r = evolve(bare_condensate(N0), reference_pump(), lossy, cfg, 10.0);
  REQUIRE_FALSE(r.failed);
  CHECK(r.final_state.condensate.N0 < 0.5 * N0);
  for (const auto& s : r.trajectory.samples) {
    CHECK(std::abs(s.N0 / oracle::three_body_decay(N0, C, s.t) - 1.0) < 1e-6);
  }
}

TEST_CASE("integrator: number ledger matches the change of the total") {
  IntegratorConfig cfg;
  cfg.condensate_floor = 1e3;
  cfg.steady_window = 1e9;
  const auto init = make_initial_state(4.2e6, 540e-9, grid(3.0, 120), ts, 1e3);
  // the 3 kT truncation keeps a bit over half of the untruncated cloud
  CHECK(init.state.thermal_number() < 4.2e6);
  CHECK(init.state.thermal_number() > 0.5 * 4.2e6);
  const auto r = evolve(init.state, reference_pump(), ts, cfg, 1.0);
  REQUIRE_FALSE(r.failed);
  const double actual = r.final_state.total_number() - init.state.total_number();
  CHECK(std::abs(r.ledger.net() - actual) < 1e-6 * init.state.total_number());
  CHECK(r.ledger.source_total == doctest::Approx(8.4e5).epsilon(1e-9));
  CHECK(r.ledger.evaporated > 0.0);
  CHECK(r.steps > 0);
}

TEST_CASE("integrator: the condensate floor at the start holds N0 and mu still") {
  IntegratorConfig cfg;
  cfg.condensate_floor = 1e3;
  cfg.steady_window = 1e9;
  const auto init = make_initial_state(4.2e6, 540e-9, grid(3.0, 120), ts, 1e3);
  const auto r = evolve(init.state, reference_pump(), ts, cfg, 0.05);
  for (const auto& s : r.trajectory.samples) CHECK(s.N0 >= 1e3);
  CHECK(r.ledger.seeded > 0.0);
}

TEST_CASE("integrator: step size underflow is a stiffness failure") {
  IntegratorConfig cfg;
  cfg.rtol = 1e-14;
  cfg.atol_g = 1e-20;
  cfg.atol_N0 = 1e-12;
  cfg.dt_init = 1e-2;
  cfg.dt_min = 1e-3;
  const auto init = make_initial_state(4.2e6, 540e-9, grid(3.0, 80), ts, 1e3);
  CHECK_THROWS_AS(step(init.state, reference_pump(), ts, cfg, 1e-2), StiffnessFailure);
  const auto r = evolve(init.state, reference_pump(), ts, cfg, 1.0);
  CHECK(r.failed);
  CHECK_FALSE(r.failure.empty());
}

TEST_CASE("integrator: step limit reports a failed run with the partial trajectory") {
  IntegratorConfig cfg;
  cfg.max_steps = 5;
  const auto init = make_initial_state(4.2e6, 540e-9, grid(3.0, 80), ts, 1e3);
  const auto r = evolve(init.state, reference_pump(), ts, cfg, 10.0);
  CHECK(r.failed);
  CHECK(r.steps == 5);
  CHECK(r.final_state.t > 0.0);
}

TEST_CASE("integrator: config validation") {
  IntegratorConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.rtol = 0.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = {};
  cfg.steady_balance = -1.0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("regrid: identity on the same grid, number preserved on a finer one") {
  const auto init = make_initial_state(4.2e6, 540e-9, grid(3.0, 100), ts, 2e4);
  const auto same = regrid(init.state, init.state.thermal.grid, ts);
  for (std::size_t i = 0; i < same.thermal.g.size(); ++i) CHECK(same.thermal.g[i] == doctest::Approx(init.state.thermal.g[i]).epsilon(1e-12));
  const auto fine = regrid(init.state, grid(3.0, 397), ts);
  CHECK(fine.thermal_number() == doctest::Approx(init.state.thermal_number()).epsilon(2e-3));
  CHECK(fine.condensate.N0 == init.state.condensate.N0);
}
