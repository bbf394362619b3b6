#include "eulerinf/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "eulerinf/radial_grid.hpp"

namespace eulerinf {

double Bump::operator()(double r) const {
  const double u = (2.0 * r - lo - hi) / (hi - lo);
  if (!(std::abs(u) < 1.0)) return 0.0;
  return amplitude * std::exp(1.0 - 1.0 / (1.0 - u * u));
}

double Bump::derivative(double r) const {
  const double u = (2.0 * r - lo - hi) / (hi - lo);
  if (!(std::abs(u) < 1.0)) return 0.0;
  const double q = 1.0 - u * u;
  // d/du exp(1 - 1/q) = exp(1 - 1/q) * (-2u / q^2)
  return amplitude * std::exp(1.0 - 1.0 / q) * (-2.0 * u / (q * q)) * 2.0 / (hi - lo);
}

double RadialProfile::operator()(double r) const {
  double v = 0.0;
  for (const auto& b : pieces_) v += b(r);
  return v;
}

double RadialProfile::derivative(double r) const {
  double v = 0.0;
  for (const auto& b : pieces_) v += b.derivative(r);
  return v;
}

RadialProfile RadialProfile::rescaled(double lambda, double c) const {
  std::vector<Bump> out;
  out.reserve(pieces_.size());
  for (const auto& b : pieces_) out.push_back({b.lo / lambda, b.hi / lambda, b.amplitude * c});
  return RadialProfile(std::move(out));
}

bool RadialProfile::empty() const {
  return std::all_of(pieces_.begin(), pieces_.end(), [](const Bump& b) { return b.amplitude == 0.0; });
}

std::pair<double, double> RadialProfile::hull() const {
  if (empty()) return {0.0, 0.0};
  double lo = INFINITY, hi = 0.0;
  for (const auto& b : pieces_) {
    if (b.amplitude == 0.0) continue;
    lo = std::min(lo, b.lo);
    hi = std::max(hi, b.hi);
  }
  return {lo, hi};
}

std::vector<std::pair<double, double>> RadialProfile::components() const {
  std::vector<std::pair<double, double>> iv;
  for (const auto& b : pieces_)
    if (b.amplitude != 0.0) iv.emplace_back(b.lo, b.hi);
  std::sort(iv.begin(), iv.end());
  std::vector<std::pair<double, double>> out;
  for (const auto& p : iv) {
    if (!out.empty() && p.first <= out.back().second) {
      out.back().second = std::max(out.back().second, p.second);
    } else {
      out.push_back(p);
    }
  }
  return out;
}

namespace {

// Composite Gauss-Legendre over each support component; bumps are smooth
// but flat at the edges, so a few hundred panels give ~1e-14.
template <class F>
double integrate_components(const RadialProfile& p, F f) {
  static const auto rule = [] {
    std::vector<double> x, w;
    gauss_legendre(8, x, w);
    return std::pair{x, w};
  }();
  constexpr int kPanels = 400;
  double acc = 0.0;
  for (const auto& [lo, hi] : p.components()) {
    const double h = (hi - lo) / kPanels;
    for (int q = 0; q < kPanels; ++q) {
      const double a = lo + q * h;
      for (std::size_t g = 0; g < rule.first.size(); ++g) {
        const double r = a + 0.5 * h * (1.0 + rule.first[g]);
        acc += 0.5 * h * rule.second[g] * f(r);
      }
    }
  }
  return acc;
}

}  // namespace

double RadialProfile::radial_moment() const {
  return integrate_components(*this, [&](double r) { return (*this)(r) * r; });
}

double RadialProfile::l2_squared() const {
  return integrate_components(*this, [&](double r) { const double v = (*this)(r); return v * v * r; });
}

double RadialProfile::grad_squared() const {
  return integrate_components(*this, [&](double r) {
    const double d = derivative(r);
    return d * d * r;
  });
}

double RadialProfile::h1_norm() const {
  return std::sqrt(2.0 * std::numbers::pi * (l2_squared() + grad_squared()));
}

}  // namespace eulerinf
