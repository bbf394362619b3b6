#include "eulerinf/radial_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace eulerinf {

void gauss_legendre(std::size_t order, std::vector<double>& x, std::vector<double>& w) {
  x.assign(order, 0.0);
  w.assign(order, 0.0);
  const std::size_t half = (order + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(order) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = z;
      for (std::size_t k = 2; k <= order; ++k) {
        const double kk = static_cast<double>(k);
        const double p2 = ((2.0 * kk - 1.0) * z * p1 - (kk - 1.0) * p0) / kk;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(order) * (z * p1 - p0) / (z * z - 1.0);
      const double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    x[i] = -z;
    x[order - 1 - i] = z;
    w[i] = w[order - 1 - i] = 2.0 / ((1.0 - z * z) * dp * dp);
  }
  if (order == 1) {
    x[0] = 0.0;
    w[0] = 2.0;
  }
}

RadialGrid RadialGrid::log_uniform(double r_min, double r_max, std::size_t n) {
  if (!(r_min > 0.0) || !(r_max > r_min) || n < 5) {
    throw std::invalid_argument("log grid needs 0 < r_min < r_max and at least 5 nodes");
  }
  std::vector<double> nodes(n);
  const double du = std::log(r_max / r_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = r_min * std::exp(du * static_cast<double>(i));
  nodes.back() = r_max;
  RadialGrid g(Spacing::log_uniform, std::move(nodes));
  g.step_ = du;
  return g;
}

RadialGrid RadialGrid::uniform(double r_min, double r_max, std::size_t n) {
  if (!(r_min > 0.0) || !(r_max > r_min) || n < 5) {
    throw std::invalid_argument("uniform grid needs 0 < r_min < r_max and at least 5 nodes");
  }
  std::vector<double> nodes(n);
  const double dr = (r_max - r_min) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) nodes[i] = r_min + dr * static_cast<double>(i);
  nodes.back() = r_max;
  RadialGrid g(Spacing::uniform, std::move(nodes));
  g.step_ = dr;
  return g;
}

GridPtr make_log_grid_per_decade(double r_min, double r_max, double nodes_per_decade) {
  const double decades = std::log10(r_max / r_min);
  const auto n = static_cast<std::size_t>(std::ceil(decades * nodes_per_decade)) + 1;
  return make_log_grid(r_min, r_max, std::max<std::size_t>(n, 5));
}

RadialGrid::RadialGrid(Spacing spacing, std::vector<double> nodes)
    : spacing_(spacing), step_(0.0), nodes_(std::move(nodes)) {
  const std::size_t n = nodes_.size();
  weights_.assign(n, 0.0);
  intervals_.resize(n - 1);
  std::vector<double> gx, gw;
  gauss_legendre(kGauss, gx, gw);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    Interval& iv = intervals_[i];
    iv.first = std::min(i == 0 ? 0 : i - 1, n - 4);
    const double a = nodes_[i];
    const double b = nodes_[i + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    for (std::size_t g = 0; g < kGauss; ++g) {
      const double s = mid + half * gx[g];
      iv.points[g] = s;
      iv.gauss_weights[g] = half * gw[g];
      for (std::size_t m = 0; m < 4; ++m) {
        double l = 1.0;
        const double xm = nodes_[iv.first + m];
        for (std::size_t q = 0; q < 4; ++q) {
          if (q == m) continue;
          const double xq = nodes_[iv.first + q];
          l *= (s - xq) / (xm - xq);
        }
        iv.lagrange[g][m] = l;
        weights_[iv.first + m] += iv.gauss_weights[g] * s * l;
      }
    }
  }
}

double RadialGrid::jacobian(std::size_t i) const {
  return spacing_ == Spacing::log_uniform ? nodes_[i] * step_ : step_;
}

double RadialGrid::index_of(double r) const {
  if (spacing_ == Spacing::log_uniform) return std::log(r / nodes_.front()) / step_;
  return (r - nodes_.front()) / step_;
}

std::size_t RadialGrid::locate(double r) const {
  const double xi = index_of(r);
  if (!(xi > 0.0)) return 0;
  auto i = static_cast<std::size_t>(xi);
  i = std::min(i, size() - 2);
  // guard against rounding at node boundaries
  while (i > 0 && r < nodes_[i]) --i;
  while (i + 2 < size() && r >= nodes_[i + 1]) ++i;
  return i;
}

double RadialGrid::spacing_at(std::size_t i) const {
  if (i + 1 >= size()) return nodes_[size() - 1] - nodes_[size() - 2];
  return nodes_[i + 1] - nodes_[i];
}

double RadialGrid::integrate(std::span<const double> h) const {
  double acc = 0.0;
  for (std::size_t i = 0; i < h.size(); ++i) acc += weights_[i] * h[i];
  return acc;
}

}  // namespace eulerinf
