#include "qkt/physics/energy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qkt {

EnergyGrid EnergyGrid::uniform(double eps_cut, std::size_t nodes) {
  if (!(eps_cut > 0.0) || !std::isfinite(eps_cut)) {
    throw std::invalid_argument("EnergyGrid: eps_cut must be positive");
  }
  if (nodes < 8) throw std::invalid_argument("EnergyGrid: need at least 8 nodes");
  EnergyGrid g;
  g.eps_cut_ = eps_cut;
  g.spacing_ = eps_cut / static_cast<double>(nodes - 1);
  g.nodes_.resize(nodes);
  g.weights_.assign(nodes, g.spacing_);
  for (std::size_t i = 0; i < nodes; ++i) g.nodes_[i] = g.spacing_ * static_cast<double>(i);
  g.nodes_.back() = eps_cut;
  constexpr double end[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  for (std::size_t k = 0; k < 3; ++k) {
    g.weights_[k] = end[k] * g.spacing_;
    g.weights_[nodes - 1 - k] = end[k] * g.spacing_;
  }
  return g;
}

long EnergyGrid::last_index_below(double eps_top) const {
  if (eps_top < 0.0 || nodes_.empty()) return -1;
  // tolerate round-off at an exact node
  const double pos = eps_top / spacing_ * (1.0 + 1e-12);
  const long idx = static_cast<long>(std::floor(pos));
  return std::min<long>(idx, static_cast<long>(nodes_.size()) - 1);
}

}  // namespace qkt
