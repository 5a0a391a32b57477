#include "qkt/experiments/invariants.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qkt/kinetics/terms.hpp"
#include "qkt/physics/bose.hpp"
#include "qkt/physics/constants.hpp"

namespace qkt {

namespace {

InvariantCheck make(std::string name, double value, double tol) {
  return InvariantCheck{std::move(name), value, tol, value <= tol};
}

// Equilibrium with the condensate: g = 1 / (exp(eps_bar / k_B T) - 1) on every node.
SystemState equilibrium_state(const Scenario& sc, double N0, double cut_kT, std::size_t nodes,
                              double bend = 0.0) {
  const double kT = constants::k_B * sc.T;
  const double mu = tf_chemical_potential(N0, sc.trap);
  auto grid = std::make_shared<const EnergyGrid>(EnergyGrid::uniform(cut_kT * kT + mu, nodes));
  std::vector<double> g(grid->size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) {
    const double x = grid->node(i) / kT;
    g[i] = 1.0 / std::expm1(x) * (1.0 + bend * std::cos(x));
  }
  return evaporation_enforcement(SystemState::from_occupation(0.0, N0, grid, std::move(g), sc.trap));
}

double weighted_sum(const KineticView& v, const std::vector<double>& rate) {
  double s = 0.0;
  for (std::size_t i = 0; i < rate.size(); ++i) s += v.w[i] * rate[i];
  return s;
}

double weighted_abs(const KineticView& v, const std::vector<double>& rate) {
  double s = 0.0;
  for (std::size_t i = 0; i < rate.size(); ++i) s += std::abs(v.w[i] * rate[i]);
  return s;
}

double max_abs(const std::vector<double>& r) {
  double m = 0.0;
  for (double x : r) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

std::vector<InvariantCheck> run_invariant_suite(const Scenario& sc, std::uint64_t seed) {
  sc.validate();
  const TrapSpecies& ts = sc.trap;
  std::vector<InvariantCheck> out;
  const double kT = constants::k_B * sc.T;

  double dos = 0.0;
  for (double x : {0.01, 0.5, 1.0, 3.0, 10.0}) {
    const double e = x * kT;
    dos = std::max(dos, std::abs(shifted_dos(e, 0.0, ts) / harmonic_dos(e, ts) - 1.0));
  }
  out.push_back(make("dos: mu = 0 reduces to the harmonic density of states", dos, 1e-10));

  // Far cut so that products leaving the window carry exp(-40) weight.
  const double N0 = 2e5;
  {
    const SystemState eq = equilibrium_state(sc, N0, 40.0, 800);
    const SystemState off = equilibrium_state(sc, N0, 40.0, 800, 0.2);
    const KineticView ve = make_view(eq, ts), vo = make_view(off, ts);
    const double tt_scale = max_abs(thermal_thermal_term(vo, ts).rate);
    const double tc_scale = max_abs(thermal_condensate_term(vo, ts).rate);
    out.push_back(make("detailed balance: thermal-thermal bracket", max_abs(thermal_thermal_term(ve, ts).rate) / tt_scale, 1e-6));
    out.push_back(make("detailed balance: thermal-condensate bracket",
                       max_abs(thermal_condensate_term(ve, ts).rate) / tc_scale, 1e-6));
  }

  const SystemState probe = equilibrium_state(sc, N0, sc.eps_cut() / kT, sc.grid_nodes, 0.2);
  const KineticView v = make_view(probe, ts);
  {
    const NodeRates tt = thermal_thermal_term(v, ts);
    const double bal = std::abs(weighted_sum(v, tt.rate) + tt.evaporated) / weighted_abs(v, tt.rate);
    out.push_back(make("thermal-thermal number conservation", bal, 1e-8));
  }
  {
    const NodeRates tc = thermal_condensate_term(v, ts);
    const double thermal = weighted_sum(v, tc.rate) + tc.evaporated;
    const double ex = std::abs(tc.dN0_dt + thermal) / std::max(std::abs(tc.dN0_dt), weighted_abs(v, tc.rate));
    out.push_back(make("thermal-condensate number exchange", ex, 1e-8));
  }
  const double L3_total = three_body_total_loss(v, ts);
  {
    const NodeRates tb = three_body_term(v, ts);
    const double split = std::abs(tb.dN0_dt + weighted_sum(v, tb.rate) + L3_total) / L3_total;
    out.push_back(make("three-body split into condensate and thermal losses", split, 1e-6));
  }
  {
    const PumpParams pump = sc.pump();
    auto f = [&](double x) { return kT * harmonic_dos(x * kT, ts) * bose_occupation_fugacity(x, pump.source_fugacity); };
    const double delivered =
        pump.Gamma * boost::math::quadrature::gauss_kronrod<double, 61>::integrate(f, 0.0, 80.0, 15, 1e-13);
    out.push_back(make("replenishment normalization Gamma * int rho g_T = Phi",
                       pump.Phi > 0.0 ? std::abs(delivered / pump.Phi - 1.0) : 0.0, 1e-6));
  }
  {
    // Stratified: uniform samples inside the condensate and in the rest of the ellipsoid
    // enclosing the window, in SI.
    const double mu = probe.condensate.mu;
    auto radii = [&](double E) {
      return std::pair{std::sqrt(2.0 * E / (ts.mass * ts.omega_r * ts.omega_r)),
                       std::sqrt(2.0 * E / (ts.mass * ts.omega_z * ts.omega_z))};
    };
    const auto [Rr, Rz] = radii(mu);
    const auto [Xr, Xz] = radii(mu + sc.eps_cut());
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    auto loss_density = [&](const Point3& r) {
      const double nc = tf_density(mu, r.x, r.y, r.z, ts);
      const double nT = thermal_density(r, probe.thermal, mu, ts);
      return ts.L3 * (nc * nc * nc + 9.0 * nc * nc * nT + 18.0 * nc * nT * nT + 6.0 * nT * nT * nT);
    };
    auto stratum = [&](double ar, double az, bool outside, double& var) {
      const int n = 200000;
      double sum = 0.0, sum2 = 0.0;
      for (int k = 0; k < n;) {
        const double a = u(rng), b = u(rng), c = u(rng);
        if (a * a + b * b + c * c > 1.0) continue;
        const Point3 r{a * ar, b * ar, c * az};
        if (outside && (r.x * r.x + r.y * r.y) / (Rr * Rr) + r.z * r.z / (Rz * Rz) < 1.0) continue;
        const double val = loss_density(r);
        sum += val;
        sum2 += val * val;
        ++k;
      }
      const double mean = sum / n;
      var = std::max(sum2 / n - mean * mean, 0.0) / n;
      return mean;
    };
    const double v_in = 4.0 / 3.0 * constants::pi * Rr * Rr * Rz;
    const double v_out = 4.0 / 3.0 * constants::pi * Xr * Xr * Xz - v_in;
    double var_in = 0.0, var_out = 0.0;
    const double m_in = v_in > 0.0 ? stratum(Rr, Rz, false, var_in) : 0.0;
    const double m_out = stratum(Xr, Xz, true, var_out);
    const double mc = v_in * m_in + v_out * m_out;
    const double se = std::sqrt(v_in * v_in * var_in + v_out * v_out * var_out);
    const double dev = std::abs(mc / L3_total - 1.0);
    // five standard errors, but never tighter than 1 %
    out.push_back(make("three-body loss integral against Monte Carlo", dev, std::max(0.01, 5.0 * se / mc)));
  }
  return out;
}

}  // namespace qkt
