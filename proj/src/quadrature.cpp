#include "etwist/quadrature.hpp"

#include "etwist/errors.hpp"
#include "etwist/units.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace etwist {

namespace {

GaussLegendreRule compute_rule(int n) {
  GaussLegendreRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = pk;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute derivative at the converged root
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = pk;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  return rule;
}

} // namespace

GaussLegendreRule gauss_legendre(int order) {
  if (order < 2) throw DomainError("gauss_legendre: order must be >= 2");
  static std::mutex mutex;
  static std::map<int, GaussLegendreRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, compute_rule(order)).first;
  return it->second;
}

RadialGrid RadialGrid::uniform_panels(double lo, double hi, int panels,
                                      int order) {
  if (!(hi > lo) || lo < 0.0 || panels < 1)
    throw DomainError("RadialGrid: need 0 <= lo < hi and panels >= 1");
  RadialGrid g;
  g.order_ = order;
  g.edges_.resize(panels + 1);
  for (int p = 0; p <= panels; ++p)
    g.edges_[p] = lo + (hi - lo) * static_cast<double>(p) / panels;
  g.edges_.back() = hi;
  g.build();
  return g;
}

RadialGrid RadialGrid::with_breakpoints(std::vector<double> breakpoints,
                                        double max_panel_width, int order) {
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                [](double a, double b) {
                                  return std::abs(a - b) <=
                                         1e-14 * std::max(1.0, std::abs(b));
                                }),
                    breakpoints.end());
  if (breakpoints.size() < 2 || breakpoints.front() < 0.0 ||
      !(max_panel_width > 0.0))
    throw DomainError("RadialGrid: need >= 2 nonnegative breakpoints");
  RadialGrid g;
  g.order_ = order;
  g.edges_.push_back(breakpoints.front());
  for (std::size_t s = 1; s < breakpoints.size(); ++s) {
    const double a = breakpoints[s - 1];
    const double b = breakpoints[s];
    const int n = std::max(1, static_cast<int>(std::ceil((b - a) / max_panel_width)));
    for (int p = 1; p <= n; ++p)
      g.edges_.push_back(p == n ? b : a + (b - a) * static_cast<double>(p) / n);
  }
  g.build();
  return g;
}

RadialGrid RadialGrid::segmented(std::vector<double> breakpoints,
                                 int panels_per_segment, int order) {
  std::sort(breakpoints.begin(), breakpoints.end());
  const double scale = breakpoints.empty() ? 1.0 : std::max(1.0, std::abs(breakpoints.back()));
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end(),
                                [&](double a, double b) {
                                  return std::abs(a - b) <= 1e-14 * scale;
                                }),
                    breakpoints.end());
  if (breakpoints.size() < 2 || breakpoints.front() < 0.0 || panels_per_segment < 1)
    throw DomainError("RadialGrid: need >= 2 nonnegative breakpoints");
  RadialGrid g;
  g.order_ = order;
  g.edges_.push_back(breakpoints.front());
  for (std::size_t s = 1; s < breakpoints.size(); ++s) {
    const double a = breakpoints[s - 1];
    const double b = breakpoints[s];
    for (int p = 1; p <= panels_per_segment; ++p)
      g.edges_.push_back(p == panels_per_segment
                             ? b
                             : a + (b - a) * static_cast<double>(p) / panels_per_segment);
  }
  g.build();
  return g;
}

RadialGrid RadialGrid::explicit_nodes(std::vector<double> nodes,
                                      std::vector<double> weights) {
  if (nodes.empty() || nodes.size() != weights.size())
    throw DomainError("RadialGrid: node/weight size mismatch");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i] < 0.0 || !(weights[i] > 0.0) ||
        (i > 0 && !(nodes[i] > nodes[i - 1])))
      throw DomainError("RadialGrid: nodes must increase from >= 0 with positive weights");
  }
  RadialGrid g;
  g.nodes_ = std::move(nodes);
  g.weights_ = std::move(weights);
  return g;
}

RadialGrid RadialGrid::refined() const {
  if (edges_.empty()) return *this;
  RadialGrid g;
  g.order_ = order_;
  for (std::size_t p = 0; p + 1 < edges_.size(); ++p) {
    g.edges_.push_back(edges_[p]);
    g.edges_.push_back(0.5 * (edges_[p] + edges_[p + 1]));
  }
  g.edges_.push_back(edges_.back());
  g.build();
  return g;
}

double RadialGrid::max_spacing() const {
  double widest = 0.0;
  for (std::size_t p = 0; p + 1 < edges_.size(); ++p)
    widest = std::max(widest, edges_[p + 1] - edges_[p]);
  return order_ > 0 ? widest / order_ : 0.0;
}

void RadialGrid::build() {
  const auto rule = gauss_legendre(order_);
  const std::size_t panels = edges_.size() - 1;
  nodes_.resize(panels * order_);
  weights_.resize(panels * order_);
  for (std::size_t p = 0; p < panels; ++p) {
    const double half = 0.5 * (edges_[p + 1] - edges_[p]);
    const double mid = 0.5 * (edges_[p + 1] + edges_[p]);
    for (int j = 0; j < order_; ++j) {
      nodes_[p * order_ + j] = mid + half * rule.nodes[j];
      weights_[p * order_ + j] = half * rule.weights[j];
    }
  }
}

} // namespace etwist
