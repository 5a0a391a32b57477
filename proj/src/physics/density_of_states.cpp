#include "qkt/physics/density_of_states.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "qkt/physics/constants.hpp"

namespace qkt {

namespace {

constexpr int kSeriesTerms = 18;
constexpr double kSeriesThreshold = 0.05;

// sum_k binom(1/2, k) r^k / (k + offset)
double half_binomial_series(double r, double offset) {
  double c = 1.0;
  double rk = 1.0;
  double sum = 0.0;
  for (int k = 0; k < kSeriesTerms; ++k) {
    sum += c * rk / (k + offset);
    c *= (0.5 - k) / (k + 1.0);
    rk *= r;
  }
  return sum;
}

// int_{x_lo}^{X} x^2 sqrt(x^2 + a) dx with x_lo = sqrt(max(0, -a)).
double inside_integral(double a, double X) {
  if (X <= 0.0) return 0.0;
  if (a > 0.0) {
    const double r = X * X / a;
    if (r < kSeriesThreshold) {
      // sqrt(a) sum_k c_k X^(2k+3) / ((2k+3) a^k)
      return 0.5 * std::sqrt(a) * X * X * X * half_binomial_series(r, 1.5);
    }
  } else if (a < 0.0) {
    const double A = -a;
    const double delta = X * X - A;
    if (delta <= 0.0) return 0.0;
    if (delta / A < kSeriesThreshold) {
      // (sqrt(A)/2) sum_k c_k delta^(k+3/2) / (A^k (k + 3/2))
      return 0.5 * std::sqrt(A) * delta * std::sqrt(delta) * half_binomial_series(delta / A, 1.5);
    }
  }
  auto F = [a](double x) {
    const double u = std::sqrt(std::max(0.0, x * x + a));
    const double log_arg = x + u;
    const double log_term = (a == 0.0 || log_arg <= 0.0) ? 0.0 : a * a / 8.0 * std::log(log_arg);
    return x * u * (2.0 * x * x + a) / 8.0 - log_term;
  };
  const double x_lo = std::sqrt(std::max(0.0, -a));
  return std::max(0.0, F(X) - F(x_lo));
}

// int_{x_lo}^{sqrt(a)} x^2 sqrt(a - x^2) dx.
double outside_integral(double a, double x_lo) {
  if (a <= 0.0) return 0.0;
  const double delta = a - x_lo * x_lo;
  if (delta <= 0.0) return 0.0;
  if (delta / a < kSeriesThreshold) {
    // (sqrt(a)/2) sum_k c_k (-1)^k delta^(k+3/2) / (a^k (k + 3/2))
    return 0.5 * std::sqrt(a) * delta * std::sqrt(delta) * half_binomial_series(-delta / a, 1.5);
  }
  const double root_a = std::sqrt(a);
  auto G = [a, root_a](double x) {
    const double w = std::sqrt(std::max(0.0, a - x * x));
    const double ratio = std::clamp(x / root_a, -1.0, 1.0);
    return -x * w * w * w / 4.0 + a * x * w / 8.0 + a * a / 8.0 * std::asin(ratio);
  };
  return std::max(0.0, a * a / 8.0 * (constants::pi / 2.0) - G(x_lo));
}

void require_non_negative(double v, const char* what) {
  if (v < 0.0 || std::isnan(v)) throw std::domain_error(std::string(what) + " must be >= 0");
}

}  // namespace

namespace scaled {

DosIntegrals dos_integrals(double eps_bar, double mu) {
  const double a_minus = 2.0 * (eps_bar - mu);
  const double a_plus = 2.0 * (eps_bar + mu);
  const double x_tf = std::sqrt(2.0 * mu);
  DosIntegrals out;
  out.inside = inside_integral(a_minus, x_tf);
  out.outside = outside_integral(a_plus, x_tf);
  return out;
}

double shifted_dos(double eps_bar, double mu) {
  const auto I = dos_integrals(eps_bar, mu);
  return 2.0 / constants::pi * (I.inside + I.outside);
}

double weighted_dos_unit(double eps_bar, double mu) {
  const auto I = dos_integrals(eps_bar, mu);
  return 2.0 / constants::pi * (I.inside - I.outside);
}

double local_dos(double eps_bar, double U_bar) {
  const double d = eps_bar - U_bar;
  if (d <= 0.0) return 0.0;
  return std::sqrt(d) / (std::numbers::sqrt2 * constants::pi * constants::pi);
}

}  // namespace scaled

double harmonic_dos(double eps, const TrapSpecies& ts) {
  require_non_negative(eps, "harmonic_dos: eps");
  const double E = ts.energy_unit();
  return eps * eps / (2.0 * E * E * E);
}

double shifted_dos(double eps_bar, double mu, const TrapSpecies& ts) {
  require_non_negative(eps_bar, "shifted_dos: eps_bar");
  require_non_negative(mu, "shifted_dos: mu");
  const double E = ts.energy_unit();
  return scaled::shifted_dos(eps_bar / E, mu / E) / E;
}

double weighted_dos(double eps_bar, double mu, double dmu_dt, const TrapSpecies& ts) {
  require_non_negative(eps_bar, "weighted_dos: eps_bar");
  require_non_negative(mu, "weighted_dos: mu");
  if (dmu_dt == 0.0) return 0.0;
  const double E = ts.energy_unit();
  return scaled::weighted_dos_unit(eps_bar / E, mu / E) / E * dmu_dt;
}

double effective_potential(const Point3& r, double mu, const TrapSpecies& ts) {
  const double v = ts.potential(r.x, r.y, r.z);
  return v < mu ? 2.0 * mu - v : v;
}

double local_dos(double eps, const Point3& r, double mu, const TrapSpecies& ts) {
  const double d = eps - effective_potential(r, mu, ts);
  if (d <= 0.0) return 0.0;
  const double m = ts.mass;
  const double hb = constants::hbar;
  return m * std::sqrt(m) / (std::numbers::sqrt2 * constants::pi * constants::pi * hb * hb * hb) *
         std::sqrt(d);
}

}  // namespace qkt
