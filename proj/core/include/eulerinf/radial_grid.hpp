#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace eulerinf {

enum class Spacing { uniform, log_uniform };

/// Radial nodes r_0 < ... < r_{n-1} with quadrature for integrals against r dr.
///
/// Every interval [r_i, r_{i+1}] carries a local rule built from the cubic
/// Lagrange interpolant through four neighbouring nodes, integrated exactly
/// with 4-point Gauss-Legendre. The global weights are the sum of these local
/// rules, so constants (indeed cubics) are integrated to rounding error.
class RadialGrid {
 public:
  static constexpr std::size_t kGauss = 4;

  struct Interval {
    std::size_t first;                          // first stencil node
    std::array<double, kGauss> points;          // Gauss abscissae s_g
    std::array<double, kGauss> gauss_weights;   // plain ds weights
    std::array<std::array<double, 4>, kGauss> lagrange;  // L_m(s_g)
  };

  static RadialGrid log_uniform(double r_min, double r_max, std::size_t n);
  static RadialGrid uniform(double r_min, double r_max, std::size_t n);

  std::size_t size() const { return nodes_.size(); }
  double node(std::size_t i) const { return nodes_[i]; }
  std::span<const double> nodes() const { return nodes_; }
  /// Weights for \int h(r) r dr.
  std::span<const double> weights() const { return weights_; }
  double r_min() const { return nodes_.front(); }
  double r_max() const { return nodes_.back(); }
  Spacing spacing() const { return spacing_; }

  /// dr/dxi at node i, xi being the continuous node index.
  double jacobian(std::size_t i) const;
  /// Continuous index of radius r (may be fractional).
  double index_of(double r) const;
  /// Interval containing r, clamped to [0, n-2].
  std::size_t locate(double r) const;
  /// Local spacing r_{i+1} - r_i (last node reuses the previous interval).
  double spacing_at(std::size_t i) const;

  const Interval& interval(std::size_t i) const { return intervals_[i]; }
  std::size_t interval_count() const { return intervals_.size(); }

  /// Integral of nodal values h against r dr.
  double integrate(std::span<const double> h) const;

 private:
  RadialGrid(Spacing spacing, std::vector<double> nodes);

  Spacing spacing_;
  double step_;  // du for log grids, dr for uniform ones
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<Interval> intervals_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

inline GridPtr make_log_grid(double r_min, double r_max, std::size_t n) {
  return std::make_shared<const RadialGrid>(RadialGrid::log_uniform(r_min, r_max, n));
}

inline GridPtr make_uniform_grid(double r_min, double r_max, std::size_t n) {
  return std::make_shared<const RadialGrid>(RadialGrid::uniform(r_min, r_max, n));
}

/// Log grid with a target density in nodes per decade.
GridPtr make_log_grid_per_decade(double r_min, double r_max, double nodes_per_decade);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(std::size_t order, std::vector<double>& x, std::vector<double>& w);

}  // namespace eulerinf
