#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "eulerinf/biot_savart.hpp"
#include "eulerinf/stats.hpp"

namespace eulerinf {
namespace {

constexpr double kPi = std::numbers::pi;

struct RadialRule {
  std::vector<double> r, w;
};

// Gauss panels over the support of g, with a panel edge at `split` so that no
// radial node lands on the probe radius.
RadialRule radial_rule(const RadialProfile& g, double split, int panels) {
  std::vector<double> gx, gw;
  gauss_legendre(8, gx, gw);
  RadialRule rule;
  for (auto [lo, hi] : g.components()) {
    std::vector<std::pair<double, double>> parts{{lo, hi}};
    if (split > lo && split < hi) parts = {{lo, split}, {split, hi}};
    for (auto [a, b] : parts) {
      const int np = std::max(8, static_cast<int>(panels * (b - a) / (hi - lo)));
      const double h = (b - a) / np;
      for (int p = 0; p < np; ++p) {
        for (std::size_t q = 0; q < gx.size(); ++q) {
          rule.r.push_back(a + h * (p + 0.5 * (1.0 + gx[q])));
          rule.w.push_back(0.5 * h * gw[q]);
        }
      }
    }
  }
  return rule;
}

// (1/2pi) int int r'^2 g(r') sin a sin(N a) / ((r-r')^2 + 2 r r' (1 - cos a)) da dr'
// with the angular trapezoid on m_alpha nodes, skipping |m| <= window.
double vr_quadrature(const RadialRule& rule, const std::vector<double>& gval, int n, double r,
                     std::size_t m_alpha, std::size_t window) {
  const double da = 2.0 * kPi / static_cast<double>(m_alpha);
  const std::size_t half = m_alpha / 2;
  std::vector<double> sa(half + 1), sn(half + 1), oc(half + 1);
  for (std::size_t m = 0; m <= half; ++m) {
    const double a = da * static_cast<double>(m);
    sa[m] = std::sin(a);
    sn[m] = std::sin(n * a);
    oc[m] = 2.0 * (1.0 - std::cos(a));
  }
  double total = 0.0;
  for (std::size_t q = 0; q < rule.r.size(); ++q) {
    const double rp = rule.r[q];
    if (gval[q] == 0.0) continue;
    const double d2 = (r - rp) * (r - rp);
    const double rr = r * rp;
    double inner = 0.0;
    for (std::size_t m = std::max<std::size_t>(1, window + 1); m <= half; ++m) {
      const double f = sa[m] * sn[m] / (d2 + rr * oc[m]);
      inner += (m == half ? 1.0 : 2.0) * f;
    }
    total += rule.w[q] * rp * rp * gval[q] * inner * da;
  }
  return total / (2.0 * kPi);
}

}  // namespace

std::vector<ProbeValue> vr_mode_formula(const RadialProfile& g, int n, std::span<const double> probes,
                                        std::size_t n_alpha) {
  if (n < 1) throw std::invalid_argument("wavenumber must be positive");
  std::vector<ProbeValue> out(probes.size());
  if (g.empty()) return out;
  std::size_t m = n_alpha ? n_alpha : std::max<std::size_t>(2048, 32 * static_cast<std::size_t>(n));
  m += m % 2;
  const auto [lo, hi] = g.hull();
  double scale = 0.0;
  for (const auto& b : g.pieces()) scale += std::abs(b.amplitude);
  scale *= hi - lo;
  for (std::size_t p = 0; p < probes.size(); ++p) {
    const double r = probes[p];
    const bool inside = r > lo && r < hi;
    const auto rule = radial_rule(g, r, 256);
    std::vector<double> gval(rule.r.size());
    for (std::size_t q = 0; q < gval.size(); ++q) gval[q] = g(rule.r[q]);
    auto eval = [&](std::size_t mm) {
      if (!inside) return vr_quadrature(rule, gval, n, r, mm, 0);
      const double i1 = vr_quadrature(rule, gval, n, r, mm, 1);
      const double i2 = vr_quadrature(rule, gval, n, r, mm, 2);
      return (4.0 * i1 - i2) / 3.0;
    };
    const double coarse = eval(m);
    const double fine = eval(2 * m);
    out[p].value = fine;
    out[p].error_estimate = std::abs(fine - coarse);
    out[p].converged = out[p].error_estimate <= 1e-4 * std::max(std::abs(fine), 1e-12 * scale);
  }
  return out;
}

DecayTable exp_decay_scan(const RadialProfile& g, double a1, double a2, std::span<const int> n_list,
                          double r_probe) {
  if (!(a1 > 0.0 && a2 > a1 && r_probe > 0.0)) throw std::invalid_argument("bad decay scan geometry");
  if (!std::is_sorted(n_list.begin(), n_list.end())) throw std::invalid_argument("N list must increase");
  // The probe sits on a grid node: node 0 below the support, the last node above it.
  const double du = std::log(a2 / a1) / 160.0;
  const bool below = r_probe < a1;
  const double r0 = below ? r_probe : a1 / 1.05;
  const double r1 = below ? 1.05 * a2 : r_probe;
  const auto n_nodes = static_cast<std::size_t>(std::ceil(std::log(r1 / r0) / du)) + 1;
  auto grid = make_log_grid(r0, r1, std::max<std::size_t>(n_nodes, 16));
  const std::size_t probe_node = below ? 0 : grid->size() - 1;
  const auto solver = solver_for(grid);
  DecayTable table;
  std::vector<double> xs, ys;
  for (int n : n_list) {
    PolarField om(grid, n, n);
    auto row = om.row(1);
    for (std::size_t i = 0; i < om.n_r(); ++i) row[i] = 0.5 * g(grid->node(i));
    const auto vel = solver->solve(om);
    const double v = 2.0 * std::abs(vel.vr.row(1)[probe_node]);
    table.rows.push_back({n, v});
    if (v > 0.0) {
      xs.push_back(n);
      ys.push_back(std::log(v));
    }
  }
  if (const auto fit = ols(xs, ys)) table.slope = fit->slope;
  return table;
}

LogLipReport loglip_modulus(const PolarField& omega, std::size_t sample_pairs, std::uint64_t seed,
                            double threshold) {
  LogLipReport rep;
  const double winf = lp_norm(omega, INFINITY);
  if (winf == 0.0) return rep;
  const auto ann = support_annulus(omega, threshold * winf);
  if (!ann || !(ann->second > ann->first)) throw std::invalid_argument("degenerate support annulus");
  rep.r_inner = ann->first;
  rep.r_outer = ann->second;
  rep.pairs = sample_pairs;
  const auto vel = solve_velocity(omega);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double r2lo = rep.r_inner * rep.r_inner, r2hi = rep.r_outer * rep.r_outer;
  const double big_r = rep.r_outer;
  auto sample_point = [&] {
    const double r = std::sqrt(r2lo + (r2hi - r2lo) * u01(rng));
    return std::array<double, 2>{r, 2.0 * kPi * u01(rng)};
  };
  std::size_t done = 0;
  while (done < sample_pairs) {
    const auto x = sample_point();
    std::array<double, 2> y;
    if (done % 2 == 0) {
      y = sample_point();
    } else {
      // short separations, log-uniform between 1e-4 R and R
      const double d = big_r * std::pow(10.0, -4.0 * u01(rng));
      const double th = 2.0 * kPi * u01(rng);
      const double cx = x[0] * std::cos(x[1]) + d * std::cos(th);
      const double cy = x[0] * std::sin(x[1]) + d * std::sin(th);
      const double ry = std::hypot(cx, cy);
      if (ry < rep.r_inner || ry > rep.r_outer) continue;
      y = {ry, std::atan2(cy, cx)};
    }
    const double dist = std::sqrt(x[0] * x[0] + y[0] * y[0] - 2.0 * x[0] * y[0] * std::cos(x[1] - y[1]));
    if (!(dist > 0.0)) continue;
    ++done;
    // Cartesian components: polar ones at two angles live in different bases
    const auto vx = vel.cartesian(x[0] * std::cos(x[1]), x[0] * std::sin(x[1]));
    const auto vy = vel.cartesian(y[0] * std::cos(y[1]), y[0] * std::sin(y[1]));
    const double dv = std::hypot(vx[0] - vy[0], vx[1] - vy[1]);
    const double modulus = winf * dist * (1.0 + std::log(big_r / dist));
    rep.constant = std::max(rep.constant, dv / modulus);
  }
  return rep;
}

double vr_linf_periodic(const PolarField& omega, double threshold) {
  if (!omega.symmetry()) throw std::logic_error("radial velocity sup needs a declared symmetry");
  const double winf = lp_norm(omega, INFINITY);
  if (winf == 0.0) return 0.0;
  const auto ann = support_annulus(omega, threshold * winf);
  if (!ann) return 0.0;
  const auto vel = solve_velocity(omega);
  const auto env = radial_envelope(vel.vr);
  double sup = 0.0;
  for (std::size_t i = 0; i < env.size(); ++i) {
    const double r = omega.grid().node(i);
    if (r >= ann->first && r <= ann->second) sup = std::max(sup, env[i]);
  }
  return sup;
}

}  // namespace eulerinf
