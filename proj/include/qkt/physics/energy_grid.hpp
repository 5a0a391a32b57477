#pragma once

#include <cstddef>
#include <vector>

namespace qkt {

/// Uniform grid on the shifted energy axis [0, eps_cut] (J). Weights are the
/// trapezoid rule with third-order end corrections (3/8, 7/6, 23/24, 1, ...), which
/// integrates cubics exactly; interior weights equal the spacing.
class EnergyGrid {
 public:
  EnergyGrid() = default;
  static EnergyGrid uniform(double eps_cut, std::size_t nodes);

  double eps_cut() const { return eps_cut_; }
  double spacing() const { return spacing_; }
  std::size_t size() const { return nodes_.size(); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double weight(std::size_t i) const { return weights_[i]; }

  /// Largest index with node <= eps_top, or -1 when eps_top < 0.
  long last_index_below(double eps_top) const;

 private:
  double eps_cut_ = 0.0;
  double spacing_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

}  // namespace qkt
