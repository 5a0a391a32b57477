#pragma once

// Independent reference implementations used by the unit tests and the acceptance run.

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "qkt/kinetics/terms.hpp"
#include "qkt/physics/constants.hpp"
#include "qkt/physics/state.hpp"

namespace qkt::oracle {

/// Small grid state with random occupations (deterministic in seed) and a condensate.
inline SystemState random_state(std::size_t nodes, double N0, double cut_hw, std::uint64_t seed,
                                const TrapSpecies& ts = TrapSpecies::rb87_reference()) {
  const double E = ts.energy_unit();
  const double mu = tf_chemical_potential(N0, ts);
  auto grid = std::make_shared<const EnergyGrid>(EnergyGrid::uniform(cut_hw * E + mu, nodes));
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> g(grid->size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) g[i] = 3.0 * u(rng) * std::exp(-grid->node(i) / (0.5 * cut_hw * E));
  return evaporation_enforcement(SystemState::from_occupation(0.0, N0, grid, std::move(g), ts));
}

/// Bose-Einstein equilibrium with the condensate, g = 1 / (exp(eps_bar / kT) - 1).
inline SystemState equilibrium_state(std::size_t nodes, double N0, double T, double cut_kT,
                                     const TrapSpecies& ts = TrapSpecies::rb87_reference()) {
  const double kT = constants::k_B * T;
  const double mu = tf_chemical_potential(N0, ts);
  auto grid = std::make_shared<const EnergyGrid>(EnergyGrid::uniform(cut_kT * kT + mu, nodes));
  std::vector<double> g(grid->size(), 0.0);
  for (std::size_t i = 1; i < g.size(); ++i) g[i] = 1.0 / std::expm1(grid->node(i) / kT);
  return evaporation_enforcement(SystemState::from_occupation(0.0, N0, grid, std::move(g), ts));
}

/// Direct O(n^3) thermal-thermal sum over every (j, k, l) with eps_i + eps_j = eps_k + eps_l,
/// kernel R w_j w_k w_l rho(min) / spacing. Indices past the window carry g = 0 and the
/// bare spacing as weight; their gain is the evaporation rate.
inline NodeRates thermal_thermal_bruteforce(const KineticView& v, const TrapSpecies& ts) {
  NodeRates out;
  out.rate.assign(v.size(), 0.0);
  const long K = v.top, L = 2 * K;
  if (K < 1) return out;
  auto g = [&](long i) { return i <= K ? v.g[static_cast<std::size_t>(i)] : 0.0; };
  auto w = [&](long i) { return v.weight_ext(i); };
  const double pref = collision_rate_constant(ts) / v.spacing;
  for (long i = 0; i <= L; ++i) {
    double acc = 0.0;
    for (long j = 0; i + j <= L; ++j) {
      const long s = i + j;
      for (long k = 0; k <= s; ++k) {
        const long l = s - k;
        const long m = std::min(std::min(i, j), std::min(k, l));
        const double rho = v.rho[static_cast<std::size_t>(m)];
        const double B = (1.0 + g(i)) * (1.0 + g(j)) * g(k) * g(l) - g(i) * g(j) * (1.0 + g(k)) * (1.0 + g(l));
        acc += w(j) * w(k) * w(l) * rho * B;
      }
    }
    if (i <= K) {
      out.rate[static_cast<std::size_t>(i)] = pref * acc;
    } else {
      out.evaporated += w(i) * pref * acc;
    }
  }
  return out;
}

/// Fraction of a Thomas-Fermi condensate lying where mu - V <= U (scaled units): radial
/// Gauss-Legendre quadrature of the parabolic profile, split at the shell boundary.
inline double condensate_fraction_numeric(double U, double mu, int cells = 16) {
  if (!(U > 0.0)) return 0.0;
  if (mu <= 0.0 || U >= mu) return 1.0;
  auto integrate = [&](double a, double b) {
    static const double x[3] = {-std::sqrt(0.6), 0.0, std::sqrt(0.6)};
    static const double wt[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
    double sum = 0.0;
    for (int c = 0; c < cells; ++c) {
      const double lo = a + (b - a) * c / cells, hi = a + (b - a) * (c + 1) / cells;
      for (int q = 0; q < 3; ++q) {
        const double s = 0.5 * (lo + hi) + 0.5 * (hi - lo) * x[q];
        sum += 0.5 * (hi - lo) * wt[q] * (mu - 0.5 * s * s) * s * s;
      }
    }
    return sum;
  };
  const double R = std::sqrt(2.0 * mu);
  const double s0 = std::sqrt(2.0 * (mu - U));
  const double inner = integrate(0.0, s0), outer = integrate(s0, R);
  return outer / (inner + outer);
}

/// Direct thermal-condensate sum over ordered pairs (i, j): the product sits at i + j and
/// the condensate atom at mu; every event moves one atom between the cloud and N0.
inline NodeRates thermal_condensate_bruteforce(const KineticView& v, const TrapSpecies& ts) {
  NodeRates out;
  out.rate.assign(v.size(), 0.0);
  const long K = v.top;
  if (K < 1 || !(v.N0 > 0.0)) return out;
  const double R = collision_rate_constant(ts);
  for (long i = 1; i <= K; ++i) {
    for (long j = 1; j <= K; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      const long k = i + j;
      const double gi = v.g[ui], gj = v.g[uj], gk = k <= K ? v.g[static_cast<std::size_t>(k)] : 0.0;
      const double ei = v.eps[ui], ej = v.eps[uj];
      const double Um = (2.0 / 3.0) * ((ei + ej) - std::sqrt(ei * ei - ei * ej + ej * ej));
      const double F = v.N0 * condensate_fraction_numeric(Um, v.mu);
      const double E = R * v.w[ui] * v.w[uj] * F * ((1.0 + gk) * gi * gj - gk * (1.0 + gi) * (1.0 + gj));
      out.rate[ui] -= E / v.w[ui];
      out.rate[uj] -= E / v.w[uj];
      if (k <= K) {
        out.rate[static_cast<std::size_t>(k)] += E / v.w[static_cast<std::size_t>(k)];
      } else {
        out.evaporated += E;
      }
      out.dN0_dt += E;
    }
  }
  return out;
}

/// max |a_i - b_i| / max |b_i|
inline double relative_gap(const std::vector<double>& a, const std::vector<double>& b) {
  double d = 0.0, s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    d = std::max(d, std::abs(a[i] - b[i]));
    s = std::max(s, std::abs(b[i]));
  }
  return s > 0.0 ? d / s : d;
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

inline double weighted_sum(const KineticView& v, const std::vector<double>& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += v.w[i] * r[i];
  return s;
}

inline double weighted_abs(const KineticView& v, const std::vector<double>& r) {
  double s = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) s += std::abs(v.w[i] * r[i]);
  return s;
}

/// Closed-form N0(t) for dN0/dt = -C N0^1.8.
inline double three_body_decay(double N0, double C, double t) {
  return std::pow(std::pow(N0, -0.8) + 0.8 * C * t, -1.25);
}

}  // namespace qkt::oracle
