#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace etwist {

// Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

GaussLegendreRule gauss_legendre(int order);

// Strictly increasing radial samples with positive quadrature weights,
// built from composite Gauss-Legendre panels between breakpoints.
class RadialGrid {
public:
  RadialGrid() = default;

  // Uniform panels on [lo, hi].
  static RadialGrid uniform_panels(double lo, double hi, int panels, int order);

  // Panels laid between the given breakpoints (kinks of the integrand);
  // each segment receives ceil(length / max_panel_width) panels.
  static RadialGrid with_breakpoints(std::vector<double> breakpoints,
                                     double max_panel_width, int order);

  // Fixed number of panels in every segment between breakpoints.
  static RadialGrid segmented(std::vector<double> breakpoints,
                              int panels_per_segment, int order);

  // Explicit nodes/weights (e.g. a single delta ring).
  static RadialGrid explicit_nodes(std::vector<double> nodes,
                                   std::vector<double> weights);

  // Same breakpoints, every panel split in two.
  RadialGrid refined() const;

  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> weights() const { return weights_; }
  std::size_t size() const { return nodes_.size(); }
  double lower() const { return edges_.empty() ? nodes_.front() : edges_.front(); }
  double upper() const { return edges_.empty() ? nodes_.back() : edges_.back(); }

  // Mean node spacing of the coarsest panel; 0 for explicit grids.
  double max_spacing() const;

  template <class F> double integrate(F&& f) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) sum += weights_[i] * f(nodes_[i]);
    return sum;
  }

private:
  void build();

  std::vector<double> edges_; // panel edges, empty for explicit grids
  int order_ = 0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

} // namespace etwist
