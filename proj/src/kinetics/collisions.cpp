#include <algorithm>
#include <cmath>

#include "qkt/kinetics/terms.hpp"

namespace qkt {

namespace {

struct Extended {
  long top = -1;
  long last = -1;  // 2 * top
  std::vector<double> g, w;
};

Extended extend(const KineticView& v) {
  Extended e;
  e.top = v.top;
  e.last = 2 * v.top;
  const auto m = static_cast<std::size_t>(std::max<long>(e.last + 1, 0));
  e.g.assign(m, 0.0);
  e.w.resize(m);
  for (long i = 0; i <= e.last; ++i) {
    e.w[static_cast<std::size_t>(i)] = v.weight_ext(i);
    if (i <= v.top) e.g[static_cast<std::size_t>(i)] = v.g[static_cast<std::size_t>(i)];
  }
  return e;
}

}  // namespace

NodeRates thermal_thermal_term(const KineticView& v, const TrapSpecies& ts) {
  NodeRates out;
  out.rate.assign(v.size(), 0.0);
  if (v.top < 1) return out;
  const Extended e = extend(v);
  const double pref = collision_rate_constant(ts) / v.spacing;
  const auto& g = e.g;
  const auto& w = e.w;

  std::vector<double> ext_rate(static_cast<std::size_t>(e.last + 1), 0.0);
  std::vector<double> tq(static_cast<std::size_t>(v.top + 2)), sufP(tq.size() + 1), sufQ(tq.size() + 1);
  for (long s = 2; s <= e.last; ++s) {
    // Ordered pairs (k, l) with k + l = s grouped by c = min(k, l) <= s/2 <= top;
    // eps_min is then min(c, m) where m = min(i, j) of the partner pair.
    const auto half = static_cast<std::size_t>(s / 2);
    sufP[half + 1] = 0.0;
    sufQ[half + 1] = 0.0;
    for (std::size_t c = half + 1; c-- > 0;) {
      const std::size_t d = static_cast<std::size_t>(s) - c;
      const double ww = (c == d ? 1.0 : 2.0) * w[c] * w[d];
      const double p = ww * g[c] * g[d];
      const double q = ww * (1.0 + g[c]) * (1.0 + g[d]);
      tq[c] = q;
      sufP[c] = sufP[c + 1] + p;
      sufQ[c] = sufQ[c + 1] + q;
    }
    double preP = 0.0, preQ = 0.0;
    for (std::size_t m = 0; m <= half; ++m) {
      const std::size_t j = static_cast<std::size_t>(s) - m;
      const double rm = v.rho[m];
      const double SP = rm * sufP[m] + preP;
      const double SQ = rm * sufQ[m] + preQ;
      preP += rm * (sufP[m] - sufP[m + 1]);
      preQ += rm * tq[m];
      const double gi = g[m], gj = g[j];
      const double bracket = (1.0 + gi) * (1.0 + gj) * SP - gi * gj * SQ;
      ext_rate[m] += w[j] * bracket;
      if (j != m) ext_rate[j] += w[m] * bracket;
    }
  }
  for (long i = 0; i <= e.last; ++i) {
    const double r = pref * ext_rate[static_cast<std::size_t>(i)];
    if (i <= v.top) {
      out.rate[static_cast<std::size_t>(i)] = r;
    } else {
      out.evaporated += w[static_cast<std::size_t>(i)] * r;
    }
  }
  return out;
}

NodeRates thermal_thermal_term(const SystemState& state, const TrapSpecies& ts) {
  return thermal_thermal_term(make_view(state, ts), ts);
}

double condensate_region_fraction(double U_minus, double mu) {
  if (!(U_minus > 0.0)) return 0.0;
  if (mu <= 0.0 || U_minus >= mu) return 1.0;
  const double s = 1.0 - U_minus / mu;
  const double s32 = s * std::sqrt(s);
  return 1.0 - 2.5 * s32 + 1.5 * s32 * s;
}

double condensate_region_integral(double U_minus, double mu, const TrapSpecies& ts) {
  const double N0 = tf_condensate_number(mu, ts);
  return N0 * condensate_region_fraction(U_minus, mu);
}

NodeRates thermal_condensate_term(const KineticView& v, const TrapSpecies& ts) {
  NodeRates out;
  out.rate.assign(v.size(), 0.0);
  if (v.top < 1 || !(v.N0 > 0.0)) return out;
  const double R = collision_rate_constant(ts);
  const long K = v.top;
  for (long i = 1; i <= K; ++i) {
    const auto ui = static_cast<std::size_t>(i);
    const double ei = v.eps[ui], gi = v.g[ui], wi = v.w[ui];
    for (long j = i; j <= K; ++j) {
      const auto uj = static_cast<std::size_t>(j);
      const double ej = v.eps[uj], gj = v.g[uj], wj = v.w[uj];
      const long k = i + j;
      const double gk = k <= K ? v.g[static_cast<std::size_t>(k)] : 0.0;
      const double B = (1.0 + gk) * gi * gj - gk * (1.0 + gi) * (1.0 + gj);
      if (B == 0.0) continue;
      const double Um = (2.0 / 3.0) * ((ei + ej) - std::sqrt(ei * ei - ei * ej + ej * ej));
      const double F = v.N0 * condensate_region_fraction(Um, v.mu);
      const double E = (i == j ? 1.0 : 2.0) * R * wi * wj * B * F;
      out.rate[ui] -= E / wi;
      out.rate[uj] -= E / wj;
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

NodeRates thermal_condensate_term(const SystemState& state, const TrapSpecies& ts) {
  return thermal_condensate_term(make_view(state, ts), ts);
}

}  // namespace qkt
