#include <doctest.h>

#include <atomic>
#include <cmath>

#include "qkt/experiments/experiments.hpp"
#include "qkt/experiments/invariants.hpp"
#include "qkt/io/run.hpp"
#include "qkt/physics/constants.hpp"

using namespace qkt;

namespace {
const TrapSpecies ts = TrapSpecies::rb87_reference();

bool same_2sf(double a, double b) {
  auto round2 = [](double x) {
    const double p = std::pow(10.0, std::floor(std::log10(x)) - 1.0);
    return std::round(x / p) * p;
  };
  return std::abs(round2(a) - round2(b)) <= 1e-12 * std::abs(b);
}

Scenario small_scenario() {
  Scenario sc;
  sc.grid_nodes = 60;
  sc.t_max = 40.0;
  return sc;
}
}  // namespace

TEST_CASE("kappa: closed form and phase-space density") {
  const double r = ts.energy_unit() / (constants::k_B * 8e-6);
  CHECK(compute_kappa(3e8, 8e-6, ts) == doctest::Approx(3e8 * r * r * r).epsilon(1e-14));
  CHECK(same_2sf(compute_kappa(3e8, 8e-6, ts), 1.1e-2));
  CHECK(phase_space_density(1e6, 8e-6, ts) == doctest::Approx(1e6 * r * r * r).epsilon(1e-14));
}

TEST_CASE("sources: catalog kappa values to one significant figure and one passing row") {
  const auto cat = io::read_catalog(QKT_SOURCE_DIR "/data/sources.csv");
  REQUIRE(cat.size() == 9);
  const std::vector<double> expected = {2e-3, 3e-12, 5e-12, 8e-5, 6e-12, 2e-9, 2e-6, 3e-6, 1e-2};
  const auto v = evaluate_sources(cat, ts);
  int passing = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double k = v[i].kappa, p = std::pow(10.0, std::floor(std::log10(k)));
    CHECK(std::round(k / p) * p == doctest::Approx(expected[i]).epsilon(1e-9));
    passing += v[i].passes;
  }
  CHECK(passing == 1);
  CHECK(v.back().passes);
  CHECK(v.front().above_threshold);
  CHECK_FALSE(v.front().passes);
}

TEST_CASE("maximizer: finds the vertex of a log-quadratic and flags edge maxima") {
  int calls = 0;
  auto f = [&](double x) {
    ++calls;
    const double u = std::log(x / 2.5);
    return 10.0 - u * u;
  };
  const auto r = maximize_prescan_golden(f, 0.5, 20.0, 8, 1e-3);
  CHECK(r.interior_max);
  CHECK(r.x == doctest::Approx(2.5).epsilon(2e-3));
  CHECK(r.f == doctest::Approx(10.0).epsilon(1e-6));
  CHECK(r.evaluations.size() == static_cast<std::size_t>(calls));
  const auto edge = maximize_prescan_golden([](double x) { return x; }, 1.0, 8.0, 5, 1e-2);
  CHECK_FALSE(edge.interior_max);
  CHECK(edge.x == doctest::Approx(8.0));
  CHECK_THROWS_AS(maximize_prescan_golden(f, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(maximize_prescan_golden(f, 1.0, 2.0, 2), std::invalid_argument);
}

TEST_CASE("groups and monotonic classification") {
  CHECK(classify_group(0.05) == KappaGroup::high_T);
  CHECK(classify_group(0.1) == KappaGroup::marginal);
  CHECK(classify_group(0.5) == KappaGroup::low_T);
  CHECK(classify_group(0.3, {0.4, 0.6}) == KappaGroup::high_T);
  SweepResult r;
  r.points.resize(4);
  const std::vector<double> in = {4.0, 1.0, 3.0, 2.0};
  const std::vector<double> n0 = {4.0, 1.0, 2.99, 3.0};  // 0.3% dip inside the noise
  for (std::size_t i = 0; i < 4; ++i) r.points[i].N0 = n0[i];
  classify_monotonic(r, in);
  CHECK(r.non_decreasing);
  CHECK_FALSE(r.non_increasing);
  r.points[2].N0 = 2.5;
  classify_monotonic(r, in);
  CHECK_FALSE(r.non_decreasing);
}

TEST_CASE("parallel_map keeps index order and uses every index once") {
  std::atomic<int> count{0};
  const auto out = parallel_map<std::size_t>(37, 3, [&](std::size_t i) {
    ++count;
    return i * i;
  });
  REQUIRE(out.size() == 37);
  for (std::size_t i = 0; i < out.size(); ++i) CHECK(out[i] == i * i);
  CHECK(count == 37);
  CHECK(parallel_map<int>(0, 4, [](std::size_t) { return 1; }).empty());
}

TEST_CASE("scenario: validation and the cut in either unit") {
  Scenario sc;
  CHECK_NOTHROW(sc.validate());
  CHECK(sc.eps_cut() == doctest::Approx(3.0 * constants::k_B * 540e-9));
  sc.eps_cut_J = 1e-29;
  CHECK(sc.eps_cut() == 1e-29);
  sc = {};
  sc.grid_nodes = 2;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
  sc = {};
  sc.gamma = -0.1;
  CHECK_THROWS_AS(sc.validate(), std::invalid_argument);
}

TEST_CASE("invariant suite passes on the reference scenario") {
  const auto checks = run_invariant_suite(Scenario{}, 3);
  CHECK(checks.size() >= 7);
  for (const auto& c : checks) {
    INFO(c.name << " value " << c.value << " tolerance " << c.tolerance);
    CHECK(c.passed);
  }
}

TEST_CASE("steady solve on a coarse grid and a warm-started gamma sweep") {
  const Scenario sc = small_scenario();
  const auto run = solve_steady(sc);
  REQUIRE_FALSE(run.point.failed);
  CHECK(run.point.steady);
  CHECK(run.point.N0 > 1e4);
  CHECK(run.point.fraction == doctest::Approx(run.point.N0 / (run.point.N0 + run.point.N_T)));
  CHECK(run.point.kappa == doctest::Approx(compute_kappa(sc.Phi, sc.T, sc.trap)));

  SweepSpec spec;
  spec.base = sc;
  spec.varying = SweepVariable::gamma;
  spec.values = {0.6, 0.2, 0.4};
  const auto r = sweep(spec);
  REQUIRE(r.points.size() == 3);
  CHECK(r.points[0].gamma == 0.6);
  for (const auto& p : r.points) CHECK(p.steady);
  CHECK(r.points[1].warm_started == false);
  CHECK(r.non_increasing);
  CHECK(r.points[1].N0 > r.points[0].N0);
}
