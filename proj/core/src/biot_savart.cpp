#include "eulerinf/biot_savart.hpp"

#include <algorithm>
#include <cmath>
#include <list>

namespace eulerinf {

// Recurrences per mode k on nodes r_0 < ... < r_{n-1}:
//   A(r) = r^{-k} int_{r_min}^{r} s^{k+1} w(s) ds
//   B(r) = r^{k}  int_{r}^{r_max} s^{1-k} w(s) ds
// are accumulated interval by interval with the factor (r_i / r_{i+1})^k <= 1,
// so no power of r is ever formed on its own and nothing overflows for large k.
// The interval integrals use the grid's cubic stencil and 4-point Gauss rule.

BiotSavart::BiotSavart(GridPtr grid) : grid_(std::move(grid)) {
  const RadialGrid& g = *grid_;
  log_weights_.resize(g.interval_count());
  for (std::size_t i = 0; i < g.interval_count(); ++i) {
    const auto& iv = g.interval(i);
    auto& w = log_weights_[i];
    w.fill(0.0);
    for (std::size_t q = 0; q < RadialGrid::kGauss; ++q) {
      const double s = iv.points[q];
      for (std::size_t m = 0; m < 4; ++m) w[m] += iv.gauss_weights[q] * s * std::log(s) * iv.lagrange[q][m];
    }
  }
}

const BiotSavart::Weights& BiotSavart::weights(int k) const {
  std::lock_guard lock(mu_);
  auto& slot = cache_[k];
  if (slot) return *slot;
  auto w = std::make_unique<Weights>();
  const RadialGrid& g = *grid_;
  const std::size_t ni = g.interval_count();
  w->inner.assign(ni, {});
  w->outer.assign(ni, {});
  const double kk = k;
  for (std::size_t i = 0; i < ni; ++i) {
    const auto& iv = g.interval(i);
    const double a = g.node(i);
    const double b = g.node(i + 1);
    for (std::size_t q = 0; q < RadialGrid::kGauss; ++q) {
      const double s = iv.points[q];
      const double ws = iv.gauss_weights[q] * s;
      const double fin = std::pow(s / b, kk);
      const double fout = std::pow(a / s, kk);
      for (std::size_t m = 0; m < 4; ++m) {
        w->inner[i][m] += ws * fin * iv.lagrange[q][m];
        w->outer[i][m] += ws * fout * iv.lagrange[q][m];
      }
    }
  }
  slot = std::move(w);
  return *slot;
}

void BiotSavart::accumulate(int k, std::span<const cplx> om, std::span<cplx> a, std::span<cplx> b) const {
  const RadialGrid& g = *grid_;
  const std::size_t n = g.size();
  const Weights& w = weights(k);
  const double kk = k;
  a[0] = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const auto& iv = g.interval(i);
    cplx acc = 0.0;
    for (std::size_t m = 0; m < 4; ++m) acc += w.inner[i][m] * om[iv.first + m];
    const double q = k == 0 ? 1.0 : std::pow(g.node(i) / g.node(i + 1), kk);
    a[i + 1] = q * a[i] + acc;
  }
  b[n - 1] = 0.0;
  for (std::size_t i = n - 1; i-- > 0;) {
    const auto& iv = g.interval(i);
    cplx acc = 0.0;
    for (std::size_t m = 0; m < 4; ++m) acc += w.outer[i][m] * om[iv.first + m];
    const double q = k == 0 ? 1.0 : std::pow(g.node(i) / g.node(i + 1), kk);
    b[i] = q * b[i + 1] + acc;
  }
}

std::vector<double> BiotSavart::radial_velocity_profile(std::span<const cplx> omega0) const {
  const std::size_t n = grid_->size();
  std::vector<cplx> a(n), b(n);
  accumulate(0, omega0, a, b);
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = a[i].real() / grid_->node(i);
  return v;
}

VelocityModes BiotSavart::solve(const PolarField& omega) const {
  if (omega.grid_ptr() != grid_) throw std::invalid_argument("vorticity lives on a different grid");
  const RadialGrid& g = *grid_;
  const std::size_t n = g.size();
  VelocityModes out;
  out.psi = PolarField(grid_, omega.k_max(), omega.symmetry());
  out.vr = out.psi;
  out.valpha = out.psi;
  out.far_moment.assign(omega.rows(), cplx{});
  out.near_moment.assign(omega.rows(), cplx{});
  std::vector<cplx> a(n), b(n), c(n);
  double edge = 0.0, peak = 0.0;
  for (std::size_t j = 0; j < omega.rows(); ++j) {
    const auto om = omega.row(j);
    for (std::size_t i = 0; i < n; ++i) peak = std::max(peak, std::abs(om[i]));
    edge = std::max(edge, std::abs(om[n - 1]));
    if (std::all_of(om.begin(), om.end(), [](cplx z) { return z == cplx{}; })) continue;
    const int k = omega.wavenumber(j);
    accumulate(k, om, a, b);
    auto psi = out.psi.row(j);
    auto vr = out.vr.row(j);
    auto va = out.valpha.row(j);
    if (k == 0) {
      c[n - 1] = 0.0;
      for (std::size_t i = n - 1; i-- > 0;) {
        const auto& iv = g.interval(i);
        cplx acc = 0.0;
        for (std::size_t m = 0; m < 4; ++m) acc += log_weights_[i][m] * om[iv.first + m];
        c[i] = c[i + 1] + acc;
      }
      const double lmax = std::log(g.r_max());
      for (std::size_t i = 0; i < n; ++i) {
        const double r = g.node(i);
        va[i] = a[i] / r;
        vr[i] = 0.0;
        psi[i] = -std::log(r) * a[i] - c[i] + lmax * a[n - 1];
      }
    } else {
      const double kk = k;
      for (std::size_t i = 0; i < n; ++i) {
        const double r = g.node(i);
        psi[i] = (a[i] + b[i]) / (2.0 * kk);
        va[i] = (a[i] - b[i]) / (2.0 * r);
        vr[i] = cplx(0.0, 1.0) * (a[i] + b[i]) / (2.0 * r);
      }
    }
    out.far_moment[j] = a[n - 1];
    out.near_moment[j] = b[0];
  }
  if (peak > 0.0 && edge > 1e-14 * peak) {
    out.truncated = true;
    out.tail_estimate = edge * g.r_max();
  }
  return out;
}

std::array<double, 2> VelocityModes::polar(double r, double alpha) const {
  const RadialGrid& g = vr.grid();
  double v_r = 0.0, v_a = 0.0;
  if (r >= g.r_min() && r <= g.r_max()) {
    v_r = synthesize(vr, r, alpha);
    v_a = synthesize(valpha, r, alpha);
    return {v_r, v_a};
  }
  const bool outside = r > g.r_max();
  const auto& mom = outside ? far_moment : near_moment;
  const double ref = outside ? g.r_max() : g.r_min();
  for (std::size_t j = 0; j < mom.size(); ++j) {
    const int k = vr.wavenumber(j);
    if (k == 0) {
      if (outside) v_a += mom[0].real() / r;
      continue;
    }
    // outside: A = mom (r_max/r)^k, B = 0; inside: A = 0, B = mom (r/r_min)^k
    const double ratio = outside ? ref / r : r / ref;
    const cplx amp = mom[j] * std::pow(ratio, k) / (2.0 * r);
    const cplx e = std::polar(1.0, k * alpha);
    v_a += 2.0 * ((outside ? amp : -amp) * e).real();
    v_r += 2.0 * (cplx(0.0, 1.0) * amp * e).real();
  }
  return {v_r, v_a};
}

std::array<double, 2> VelocityModes::cartesian(double x, double y) const {
  const double r = std::hypot(x, y);
  if (r == 0.0) {
    // only k = 1 survives at the origin: v = -B_1/r_min * (i e^{i a}) doubled
    if (near_moment.size() > 1 && vr.wavenumber(1) == 1) {
      const cplx m = near_moment[1] / vr.grid().r_min();
      return {-m.imag(), -m.real()};
    }
    return {0.0, 0.0};
  }
  const double alpha = std::atan2(y, x);
  const auto [v_r, v_a] = polar(r, alpha);
  const double c = x / r, s = y / r;
  return {v_r * c - v_a * s, v_r * s + v_a * c};
}

std::shared_ptr<const BiotSavart> solver_for(const GridPtr& grid) {
  static std::mutex mu;
  static std::list<std::shared_ptr<const BiotSavart>> cache;
  std::lock_guard lock(mu);
  for (auto it = cache.begin(); it != cache.end(); ++it) {
    if ((*it)->grid() == grid) {
      cache.splice(cache.begin(), cache, it);
      return cache.front();
    }
  }
  cache.push_front(std::make_shared<const BiotSavart>(grid));
  if (cache.size() > 16) cache.pop_back();
  return cache.front();
}

VelocityModes solve_velocity(const PolarField& omega) { return solver_for(omega.grid_ptr())->solve(omega); }

}  // namespace eulerinf
