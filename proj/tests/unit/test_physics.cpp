#include <doctest.h>

#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qkt/physics/bose.hpp"
#include "qkt/physics/constants.hpp"
#include "qkt/physics/density_of_states.hpp"
#include "qkt/physics/energy_grid.hpp"
#include "qkt/physics/state.hpp"
#include "qkt/physics/thomas_fermi.hpp"
#include "qkt/physics/trap_species.hpp"

using namespace qkt;
using boost::math::quadrature::gauss_kronrod;

namespace {
const TrapSpecies ts = TrapSpecies::rb87_reference();
const double E = ts.energy_unit();
}  // namespace

TEST_CASE("trap: geometric mean frequency and units") {
  CHECK(ts.omega_bar() == doctest::Approx(std::cbrt(ts.omega_r * ts.omega_r * ts.omega_z)).epsilon(1e-14));
  CHECK(ts.energy_unit() == doctest::Approx(constants::hbar * ts.omega_bar()).epsilon(1e-14));
  CHECK(ts.g_int() == doctest::Approx(4.0 * constants::pi * constants::hbar * constants::hbar *
                                      ts.scattering_length / ts.mass).epsilon(1e-14));
  // 540 nK is about 202 trap quanta
  CHECK(constants::k_B * 540e-9 / E == doctest::Approx(203.4).epsilon(5e-3));
  TrapSpecies bad = ts;
  bad.mass = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  bad = ts;
  bad.omega_z = -1.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("dos: mu = 0 is the harmonic density of states, property over random energies") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-3.0, 4.0);
  for (int k = 0; k < 200; ++k) {
    const double eps = std::pow(10.0, u(rng)) * E;
    CHECK(std::abs(shifted_dos(eps, 0.0, ts) / harmonic_dos(eps, ts) - 1.0) < 1e-10);
  }
  CHECK(harmonic_dos(2.0 * E, ts) == doctest::Approx(2.0 / E).epsilon(1e-14));
}

TEST_CASE("dos: shifted density of states equals the phase-space integral of the local one") {
  // rho(eps_bar) = int d^3r rho(eps_bar + mu, r) over the region eps > V_eff(r); radially in
  // scaled coordinates, with the kink at the condensate surface as a panel edge.
  for (double mu_hw : {5.0, 30.0, 80.0}) {
    const double mu = mu_hw * E;
    for (double e_hw : {0.3, 4.0, 50.0, 400.0}) {
      const double U_bar_max = e_hw;
      auto f = [&](double s) {
        const double U = std::abs(mu_hw - 0.5 * s * s);
        return 4.0 * constants::pi * s * s * scaled::local_dos(e_hw, U);
      };
      const double s_tf = std::sqrt(2.0 * mu_hw);
      const double s_max = std::sqrt(2.0 * (mu_hw + U_bar_max));
      // inner edge of the allowed shell inside the condensate
      const double s_in = mu_hw > e_hw ? std::sqrt(2.0 * (mu_hw - e_hw)) : 0.0;
      const double inner = gauss_kronrod<double, 61>::integrate(f, s_in, s_tf, 15, 1e-14);
      const double outer = gauss_kronrod<double, 61>::integrate(f, s_tf, s_max, 15, 1e-14);
      const double numeric = (inner + outer) / E;
      CHECK(shifted_dos(e_hw * E, mu, ts) == doctest::Approx(numeric).epsilon(1e-7));
      CHECK(scaled::shifted_dos(e_hw, mu_hw) == doctest::Approx(numeric * E).epsilon(1e-7));
    }
  }
}

TEST_CASE("dos: no states at the band edge and asymptotic approach to the bare trap") {
  CHECK(shifted_dos(0.0, 20.0 * E, ts) * E < 1e-12);
  CHECK(shifted_dos(1e-3 * E, 20.0 * E, ts) > 0.0);
  const double mu = 10.0 * E, eps = 1e5 * E;
  CHECK(shifted_dos(eps, mu, ts) / harmonic_dos(eps + mu, ts) == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("thomas-fermi: number, chemical potential and density agree") {
  for (double N0 : {1e3, 4e5, 3e6}) {
    const double mu = tf_chemical_potential(N0, ts);
    CHECK(tf_condensate_number(mu, ts) == doctest::Approx(N0).epsilon(1e-12));
    // integrate the density over the ellipsoid in scaled radius
    const double Rr = std::sqrt(2.0 * mu / (ts.mass * ts.omega_r * ts.omega_r));
    const double Rz = std::sqrt(2.0 * mu / (ts.mass * ts.omega_z * ts.omega_z));
    auto f = [&](double u) { return 4.0 * constants::pi * u * u * tf_density(mu, u * Rr, 0.0, 0.0, ts); };
    const double N = Rr * Rr * Rz * gauss_kronrod<double, 31>::integrate(f, 0.0, 1.0, 10, 1e-14);
    CHECK(N == doctest::Approx(N0).epsilon(1e-10));
    const double h = 1e-6 * N0;
    const double slope = (tf_chemical_potential(N0 + h, ts) - tf_chemical_potential(N0 - h, ts)) / (2.0 * h);
    CHECK(tf_dmu_dN0(N0, ts) == doctest::Approx(slope).epsilon(1e-6));
  }
  CHECK(tf_chemical_potential(0.0, ts) == 0.0);
  CHECK(tf_density(tf_chemical_potential(1e5, ts), 1.0, 0.0, 0.0, ts) == 0.0);
}

TEST_CASE("bose: polylog, ideal-gas number and fugacity inversion") {
  CHECK(polylog3(1.0) == doctest::Approx(constants::zeta3).epsilon(1e-12));
  CHECK(polylog3(0.5) == doctest::Approx(0.53721319360804020094).epsilon(1e-12));
  CHECK(polylog3(1e-8) == doctest::Approx(1e-8).epsilon(1e-7));
  const double T = 540e-9;
  const double r = constants::k_B * T / E;
  CHECK(harmonic_bose_number(T, 0.5, ts) == doctest::Approx(r * r * r * polylog3(0.5)).epsilon(1e-12));
  for (double N : {1e4, 1e6, 4.2e6}) {
    const auto sol = solve_fugacity(N, T, ts);
    CHECK_FALSE(sol.critical);
    CHECK(harmonic_bose_number(T, sol.z, ts) == doctest::Approx(N).epsilon(1e-7));
  }
  CHECK(solve_fugacity(1e9, T, ts).critical);
  // ideal-gas critical temperature of the initial cloud, about 400 nK
  CHECK(critical_temperature(4.2e6, ts) == doctest::Approx(403e-9).epsilon(5e-3));
  CHECK(bose_occupation_fugacity(1.0, 0.3) == doctest::Approx(0.3 / (std::exp(1.0) - 0.3)).epsilon(1e-14));
}

TEST_CASE("grid: end-corrected weights integrate cubics exactly") {
  const EnergyGrid grid = EnergyGrid::uniform(600.0 * E, 400);
  CHECK(grid.size() == 400);
  CHECK(grid.spacing() == doctest::Approx(600.0 * E / 399.0).epsilon(1e-14));
  for (int p = 0; p <= 3; ++p) {
    double s = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) s += grid.weight(i) / E * std::pow(grid.node(i) / E, p);
    CHECK(s == doctest::Approx(std::pow(600.0, p + 1) / (p + 1)).epsilon(1e-12));
  }
  CHECK(grid.last_index_below(-1.0) == -1);
  CHECK(grid.last_index_below(grid.node(10) * (1.0 + 1e-14)) == 10);
  CHECK_THROWS_AS(EnergyGrid::uniform(-1.0, 10), std::invalid_argument);
}

TEST_CASE("state: populations and occupations are consistent") {
  auto grid = std::make_shared<const EnergyGrid>(EnergyGrid::uniform(300.0 * E, 64));
  std::vector<double> g(grid->size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) g[i] = 1.0 / std::expm1(grid->node(i) / (100.0 * E));
  const auto s = SystemState::from_occupation(0.0, 1e5, grid, g, ts);
  std::vector<double> rg(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) rg[i] = s.thermal.rho_bar[i] * g[i];
  const auto t = SystemState::from_populations(0.0, 1e5, grid, rg, ts);
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(t.thermal.g[i] == doctest::Approx(g[i]).epsilon(1e-12));
  CHECK(s.total_number() == doctest::Approx(1e5 + s.thermal_number()));
  CHECK(s.condensate_fraction() == doctest::Approx(1e5 / s.total_number()));
  CHECK(s.condensate.mu == doctest::Approx(tf_chemical_potential(1e5, ts)));
  CHECK_THROWS(SystemState::from_occupation(0.0, -1.0, grid, g, ts));
}
