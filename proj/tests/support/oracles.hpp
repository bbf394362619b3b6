#pragma once

// Reference computations that share no code path with the library's
// mode-space solvers.

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <vector>

#include "eulerinf/polar_field.hpp"
#include "eulerinf/radial_grid.hpp"
#include "test_util.hpp"

namespace oracle {

using Scalar2D = std::function<double(double x, double y)>;

// v(x) = (1/2pi) int (x-y)^perp / |x-y|^2 w(y) dy evaluated in polar
// coordinates centred at x: y = x + rho e_theta, so the kernel times the area
// element is e_theta^perp d rho dtheta and the integrand is bounded.
inline std::array<double, 2> biot_savart(const Scalar2D& w, double x, double y, double rho_max,
                                         int n_theta = 512, int panels = 400) {
  std::vector<double> gx, gw;
  eulerinf::gauss_legendre(8, gx, gw);
  const double dth = 2.0 * std::numbers::pi / n_theta;
  const double h = rho_max / panels;
  double vx = 0.0, vy = 0.0;
  for (int t = 0; t < n_theta; ++t) {
    const double th = dth * t;
    const double c = std::cos(th), s = std::sin(th);
    double line = 0.0;
    for (int p = 0; p < panels; ++p) {
      for (std::size_t q = 0; q < gx.size(); ++q) {
        const double rho = h * (p + 0.5 * (1.0 + gx[q]));
        line += 0.5 * h * gw[q] * w(x + rho * c, y + rho * s);
      }
    }
    // (x - y)^perp with x - y = -rho e = (-rho c, -rho s): perp(a,b) = (-b, a)
    vx += s * line;
    vy += -c * line;
  }
  const double f = dth / (2.0 * std::numbers::pi);
  return {vx * f, vy * f};
}

// Smooth random field sum_k a_k(r) cos(k a) + b_k(r) sin(k a), bumps in (lo, hi).
struct RandomVorticity {
  int k_max = 8;
  std::vector<double> ca, cb, lo, hi;

  RandomVorticity(int k, std::uint64_t seed, double r_lo, double r_hi) : k_max(k) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int j = 0; j <= k; ++j) {
      ca.push_back(u(rng));
      cb.push_back(j == 0 ? 0.0 : u(rng));
      const double a = r_lo + 0.3 * (r_hi - r_lo) * (0.5 + 0.5 * u(rng));
      const double b = r_hi - 0.3 * (r_hi - r_lo) * (0.5 + 0.5 * u(rng));
      lo.push_back(a);
      hi.push_back(b);
    }
  }

  double polar(double r, double alpha) const {
    double v = 0.0;
    for (int j = 0; j <= k_max; ++j) {
      const double b = testutil::bump(r, lo[j], hi[j]);
      if (b == 0.0) continue;
      v += b * (ca[j] * std::cos(j * alpha) + cb[j] * std::sin(j * alpha));
    }
    return v;
  }
  double operator()(double x, double y) const { return polar(std::hypot(x, y), std::atan2(y, x)); }

  eulerinf::PolarField field(eulerinf::GridPtr g) const {
    eulerinf::PolarField f(g, k_max);
    for (int j = 0; j <= k_max; ++j) {
      auto row = f.row(j);
      for (std::size_t i = 0; i < f.n_r(); ++i) {
        const double b = testutil::bump(g->node(i), lo[j], hi[j]);
        row[i] = j == 0 ? eulerinf::cplx(ca[0] * b, 0.0) : 0.5 * eulerinf::cplx(ca[j], -cb[j]) * b;
      }
    }
    return f;
  }
};

// Odd smooth step: S(x) + S(-x) = 1, S = 0 for x <= -1, 1 for x >= 1.
inline double smooth_step(double x) {
  auto psi = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  return psi(x + 1.0) / (psi(x + 1.0) + psi(1.0 - x));
}

// Unit disk mollified in r^2, so the circulation is exactly that of the disk.
inline double rankine(double r, double eps) { return smooth_step((1.0 - r * r) / eps); }

}  // namespace oracle

namespace oracle {

// ||f||^2 in H^{-eta} dot via the Riesz potential:
//   c_eta int int f(x) f(y) |x-y|^{2 eta - 2} dx dy,
//   c_eta = Gamma(1 - eta) / (4^eta pi Gamma(eta)).
// Inner integral in polar coordinates about x with rho = u^{1/(2 eta)}, which
// removes the rho^{2 eta - 1} singularity; outer integral on a polar grid.
inline double riesz_energy(const Scalar2D& f, double support_radius, double eta, int n_r = 48,
                           int n_a = 32, int n_theta = 96, int n_rho = 96) {
  std::vector<double> gx, gw;
  eulerinf::gauss_legendre(static_cast<std::size_t>(n_rho), gx, gw);
  std::vector<double> rx, rw;
  eulerinf::gauss_legendre(static_cast<std::size_t>(n_r), rx, rw);
  const double rho_max = 2.0 * support_radius;
  const double umax = std::pow(rho_max, 2.0 * eta);
  double outer = 0.0;
  for (int i = 0; i < n_r; ++i) {
    const double r = 0.5 * support_radius * (1.0 + rx[i]);
    const double wr = 0.5 * support_radius * rw[i] * r;
    for (int a = 0; a < n_a; ++a) {
      const double al = 2.0 * std::numbers::pi * a / n_a;
      const double x = r * std::cos(al), y = r * std::sin(al);
      const double fx = f(x, y);
      if (fx == 0.0) continue;
      double inner = 0.0;
      for (int t = 0; t < n_theta; ++t) {
        const double th = 2.0 * std::numbers::pi * t / n_theta;
        const double c = std::cos(th), s = std::sin(th);
        for (int q = 0; q < n_rho; ++q) {
          const double u = 0.5 * umax * (1.0 + gx[q]);
          const double rho = std::pow(u, 1.0 / (2.0 * eta));
          // rho^{2eta-1} d rho = du / (2 eta)
          inner += 0.5 * umax * gw[q] * f(x + rho * c, y + rho * s) / (2.0 * eta);
        }
      }
      inner *= 2.0 * std::numbers::pi / n_theta;
      outer += wr * (2.0 * std::numbers::pi / n_a) * fx * inner;
    }
  }
  const double c = std::tgamma(1.0 - eta) / (std::pow(4.0, eta) * std::numbers::pi * std::tgamma(eta));
  return c * outer;
}

}  // namespace oracle
