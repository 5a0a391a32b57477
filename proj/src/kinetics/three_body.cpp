#include <array>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "qkt/kinetics/terms.hpp"
#include "qkt/physics/constants.hpp"

namespace qkt {

namespace {

constexpr int kPanelsInside = 16;
constexpr int kPanelsOutside = 32;

struct RadialRule {
  std::vector<double> s;
  std::vector<double> weight;  // includes 4 pi s^2
};

// Panels cluster quadratically toward the condensate surface, where the local density of
// states of the low shells is confined to a thin layer.
void add_panels(RadialRule& rule, double a, double b, int panels, bool cluster_at_b) {
  using GL = boost::math::quadrature::gauss<double, 8>;
  const auto& x = GL::abscissa();
  const auto& wt = GL::weights();
  auto edge = [&](int k) {
    const double u = static_cast<double>(k) / panels;
    const double f = cluster_at_b ? 1.0 - (1.0 - u) * (1.0 - u) : u * u;
    return a + (b - a) * f;
  };
  for (int p = 0; p < panels; ++p) {
    const double lo = edge(p), hi = edge(p + 1);
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    for (std::size_t q = 0; q < x.size(); ++q) {
      for (int sign : {-1, 1}) {
        if (x[q] == 0.0 && sign > 0) continue;
        const double s = mid + sign * half * x[q];
        rule.s.push_back(s);
        rule.weight.push_back(4.0 * constants::pi * s * s * half * wt[q]);
      }
    }
  }
}

RadialRule radial_rule(double mu, double eps_top) {
  RadialRule rule;
  const double s_tf = std::sqrt(2.0 * std::max(mu, 0.0));
  const double s_max = std::sqrt(2.0 * (std::max(mu, 0.0) + eps_top));
  if (s_tf > 0.0) add_panels(rule, 0.0, s_tf, kPanelsInside, true);
  if (s_max > s_tf) add_panels(rule, s_tf, s_max, kPanelsOutside, false);
  return rule;
}

// Scaled interaction: n_c = max(0, mu - s^2/2) / (4 pi a / length_unit).
double condensate_density(double s, double mu, double a_scaled) {
  const double v = mu - 0.5 * s * s;
  return v > 0.0 ? v / (4.0 * constants::pi * a_scaled) : 0.0;
}

double ccc_closed_form(double mu, double a_scaled) {
  if (!(mu > 0.0)) return 0.0;
  const double c = 4.0 * constants::pi * a_scaled;
  return 4.0 * constants::pi * std::pow(2.0 * mu, 1.5) * mu * mu * mu * (16.0 / 315.0) / (c * c * c);
}

template <class Visitor>
void sweep_radius(const KineticView& v, const TrapSpecies& ts, Visitor&& visit) {
  if (v.top < 0) return;
  const double a_scaled = ts.scattering_length / ts.length_unit();
  const RadialRule rule = radial_rule(v.mu, v.eps[static_cast<std::size_t>(v.top)]);
  std::vector<double> loc(static_cast<std::size_t>(v.top + 1), 0.0);
  for (std::size_t q = 0; q < rule.s.size(); ++q) {
    const double U = scaled::shifted_potential(rule.s[q], v.mu);
    double nT = 0.0;
    for (long i = 1; i <= v.top; ++i) {
      const auto ui = static_cast<std::size_t>(i);
      loc[ui] = scaled::local_dos(v.eps[ui], U);
      nT += v.w[ui] * loc[ui] * v.g[ui];
    }
    visit(rule.weight[q], condensate_density(rule.s[q], v.mu, a_scaled), nT, loc);
  }
}

double scaled_L3(const TrapSpecies& ts) {
  const double l = ts.length_unit();
  return ts.L3 / (l * l * l * l * l * l);
}

}  // namespace

DensityProducts density_products(const KineticView& v, const TrapSpecies& ts) {
  DensityProducts d;
  d.ccc = ccc_closed_form(v.mu, ts.scattering_length / ts.length_unit());
  sweep_radius(v, ts, [&](double W, double nc, double nT, const std::vector<double>&) {
    d.cct += W * nc * nc * nT;
    d.ctt += W * nc * nT * nT;
    d.ttt += W * nT * nT * nT;
  });
  return d;
}

double three_body_total_loss(const KineticView& v, const TrapSpecies& ts) {
  const DensityProducts d = density_products(v, ts);
  return scaled_L3(ts) * (d.ccc + 9.0 * d.cct + 18.0 * d.ctt + 6.0 * d.ttt);
}

double three_body_condensate_closed_form(double N0, const TrapSpecies& ts) {
  if (!(N0 > 0.0)) return 0.0;
  const double base = ts.mass * ts.omega_bar() / (constants::hbar * std::sqrt(ts.scattering_length));
  return -ts.L3 * std::pow(15.0, 0.8) / (168.0 * constants::pi * constants::pi) * std::pow(base, 2.4) *
         std::pow(N0, 1.8);
}

NodeRates three_body_term(const KineticView& v, const TrapSpecies& ts) {
  NodeRates out;
  out.rate.assign(v.size(), 0.0);
  if (!(ts.L3 > 0.0)) return out;
  const double L = scaled_L3(ts);
  const double ccc = ccc_closed_form(v.mu, ts.scattering_length / ts.length_unit());
  std::vector<double> acc(v.size(), 0.0);
  double cond = 0.0;
  sweep_radius(v, ts, [&](double W, double nc, double nT, const std::vector<double>& loc) {
    cond += W * nT * (6.0 * nc * nc + 6.0 * nc * nT);
    const double A = W * (3.0 * nc * nc + 12.0 * nc * nT + 6.0 * nT * nT);
    if (A == 0.0) return;
    for (std::size_t i = 1; i < loc.size(); ++i) acc[i] += A * loc[i];
  });
  for (long i = 1; i <= v.top; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    out.rate[ui] = -L * v.g[ui] * acc[ui];
  }
  out.dN0_dt = -L * (ccc + cond);
  return out;
}

NodeRates three_body_term(const SystemState& state, const TrapSpecies& ts) {
  return three_body_term(make_view(state, ts), ts);
}

}  // namespace qkt
