#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "eulerinf/biot_savart.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace eulerinf;
using testutil::bump;

namespace {

constexpr double kPi = std::numbers::pi;

double max_abs(std::span<const cplx> v) {
  double m = 0.0;
  for (auto z : v) m = std::max(m, std::abs(z));
  return m;
}

}  // namespace

TEST_SUITE("biot_savart") {
  TEST_CASE("matches direct kernel quadrature on random compact fields") {
    auto g = make_log_grid(0.3, 3.0, 256);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      oracle::RandomVorticity w(8, seed, 0.5, 2.5);
      const auto vel = solve_velocity(w.field(g));
      std::mt19937_64 rng(100 + seed);
      std::uniform_int_distribution<std::size_t> node(10, 245);
      std::uniform_real_distribution<double> ang(-kPi, kPi);
      double scale = 0.0, err = 0.0;
      for (int p = 0; p < 6; ++p) {
        const double r = g->node(node(rng)), a = ang(rng);
        const auto v = vel.cartesian(r * std::cos(a), r * std::sin(a));
        const auto ref = oracle::biot_savart(w, r * std::cos(a), r * std::sin(a), r + 2.6, 256, 200);
        err = std::max(err, std::hypot(v[0] - ref[0], v[1] - ref[1]));
        scale = std::max(scale, std::hypot(ref[0], ref[1]));
      }
      CHECK(err / scale < 1e-5);
    }
  }

  TEST_CASE("mollified Rankine vortex") {
    auto g = make_log_grid(1e-3, 3.0, 600);
    auto f = testutil::radial_mode(g, 0, 0, [](double r) { return oracle::rankine(r, 0.1); });
    const auto vel = solve_velocity(f);
    double err = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double r = g->node(i);
      const double v = vel.valpha.row(0)[i].real();
      if (r * r < 0.9 && r > 0.01) err = std::max(err, std::abs(v - r / 2.0));
      if (r * r > 1.1) err = std::max(err, std::abs(v - 1.0 / (2.0 * r)));
    }
    CHECK(err < 1e-4);
    CHECK(max_abs(vel.vr.row(0)) == 0.0);
  }

  TEST_CASE("linearity") {
    auto g = make_log_grid(0.3, 3.0, 128);
    const auto a = oracle::RandomVorticity(6, 4, 0.5, 2.5).field(g);
    const auto b = oracle::RandomVorticity(6, 5, 0.5, 2.5).field(g);
    const auto va = solve_velocity(a), vb = solve_velocity(b);
    const auto vc = solve_velocity(2.0 * a + (-3.0) * b);
    const auto diff = vc.valpha - (2.0 * va.valpha + (-3.0) * vb.valpha);
    const auto diff_r = vc.vr - (2.0 * va.vr + (-3.0) * vb.vr);
    const double s = lp_norm(vc.valpha, 2.0) + lp_norm(vc.vr, 2.0);
    CHECK((lp_norm(diff, 2.0) + lp_norm(diff_r, 2.0)) / s < 1e-12);
  }

  TEST_CASE("mode-wise divergence residual is small") {
    auto g = make_log_grid(0.3, 3.0, 512);
    const auto w = oracle::RandomVorticity(8, 9, 0.5, 2.5).field(g);
    const auto vel = solve_velocity(w);
    std::vector<cplx> rv(g->size()), d(g->size());
    double res = 0.0, mag = 0.0;
    for (std::size_t j = 0; j < w.rows(); ++j) {
      const double k = w.wavenumber(j);
      for (std::size_t i = 0; i < g->size(); ++i) rv[i] = g->node(i) * vel.vr.row(j)[i];
      radial_derivative(*g, rv, d);
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double r = g->node(i);
        const cplx div = d[i] / r + cplx(0.0, k) * vel.valpha.row(j)[i] / r;
        res += g->weights()[i] * std::norm(div);
        mag += g->weights()[i] * (std::norm(vel.vr.row(j)[i]) + std::norm(vel.valpha.row(j)[i]));
      }
    }
    CHECK(std::sqrt(res / mag) < 1e-6);
  }

  TEST_CASE("angular mean of v_r vanishes for a single harmonic") {
    auto g = make_log_grid(0.3, 3.0, 128);
    auto f = testutil::radial_mode(g, 6, 6, [](double r) { return bump(r, 1.0, 2.0); }, 6);
    const auto vel = solve_velocity(f);
    CHECK(max_abs(vel.vr.row(0)) == 0.0);
    CHECK(angular_average(vel.vr).is_zero());
  }

  TEST_CASE("exterior multipole expansion matches the kernel") {
    auto g = make_log_grid(0.3, 3.0, 256);
    oracle::RandomVorticity w(5, 21, 0.5, 2.5);
    const auto vel = solve_velocity(w.field(g));
    for (double x : {4.0, 7.5}) {
      const auto v = vel.cartesian(x, 1.0);
      const auto ref = oracle::biot_savart(w, x, 1.0, std::hypot(x, 1.0) + 2.6, 4096, 200);
      CHECK(std::hypot(v[0] - ref[0], v[1] - ref[1]) < 1e-6 * std::hypot(ref[0], ref[1]));
    }
  }

  TEST_CASE("truncation is reported") {
    auto g = make_log_grid(0.3, 2.0, 64);
    auto f = testutil::radial_mode(g, 0, 0, [](double r) { return bump(r, 1.0, 3.0); });
    const auto vel = solve_velocity(f);
    CHECK(vel.truncated);
    CHECK(vel.tail_estimate > 0.0);
    auto h = testutil::radial_mode(g, 0, 0, [](double r) { return bump(r, 1.0, 1.5); });
    CHECK_FALSE(solve_velocity(h).truncated);
  }

  TEST_CASE("direct p.v. formula agrees with the mode solver outside the support") {
    const RadialProfile prof({Bump{1.0, 2.0, 1.0}});
    auto g = make_log_grid(0.02, 3.0, 900);
    PolarField f(g, 2, 2);
    // g sin(2a) = 2 Re(-i g / 2 e^{2ia})
    for (std::size_t i = 0; i < f.n_r(); ++i) f.row(1)[i] = cplx(0.0, -0.5) * prof(g->node(i));
    const auto vel = solve_velocity(f);
    const std::vector<double> probes{g->node(g->size() - 1), g->node(40)};
    const auto direct = vr_mode_formula(prof, 2, probes);
    for (std::size_t p = 0; p < probes.size(); ++p) {
      const std::size_t i = p == 0 ? g->size() - 1 : 40;
      const double mode = 2.0 * vel.vr.row(1)[i].real();
      CHECK(direct[p].converged);
      CHECK(direct[p].value == doctest::Approx(mode).epsilon(1e-4));
    }
  }

  TEST_CASE("direct formula inside the support converges") {
    const RadialProfile prof({Bump{1.0, 2.0, 1.0}});
    auto g = make_log_grid(0.5, 3.0, 900);
    PolarField f(g, 3, 3);
    for (std::size_t i = 0; i < f.n_r(); ++i) f.row(1)[i] = cplx(0.0, -0.5) * prof(g->node(i));
    const auto vel = solve_velocity(f);
    const std::size_t i = g->locate(1.5);
    const std::vector<double> probes{g->node(i)};
    const auto direct = vr_mode_formula(prof, 3, probes);
    CHECK(direct[0].value == doctest::Approx(2.0 * vel.vr.row(1)[i].real()).epsilon(1e-3));
  }

  TEST_CASE("direct formula is exponentially small near the origin") {
    const RadialProfile prof({Bump{1.0, 2.0, 1.0}});
    const std::vector<double> probes{0.05};
    const auto v = vr_mode_formula(prof, 4, probes);
    // |v_r| <~ (a2 - a1)/r ||g||_inf e^{-N}; C = 1 here
    CHECK(std::abs(v[0].value) < std::exp(-4.0) * 1.0 / 0.05);
    const auto z = vr_mode_formula(RadialProfile{}, 4, probes);
    CHECK(z[0].value == 0.0);
  }

  TEST_CASE("exponential decay scan") {
    const RadialProfile prof({Bump{1.0, 2.0, 1.0}});
    const std::vector<int> ns{4, 8, 16, 32};
    const auto t = exp_decay_scan(prof, 1.0, 2.0, ns, 1.0 / 24.0);
    REQUIRE(t.slope);
    CHECK(*t.slope <= -0.9);
    const auto t2 = exp_decay_scan(prof * 2.0, 1.0, 2.0, ns, 1.0 / 24.0);
    for (std::size_t i = 0; i < ns.size(); ++i) CHECK(t2.rows[i].vr_max == doctest::Approx(2.0 * t.rows[i].vr_max).epsilon(1e-12));
    const std::vector<int> one{8};
    CHECK_FALSE(exp_decay_scan(prof, 1.0, 2.0, one, 1.0 / 24.0).slope);
  }

  TEST_CASE("log-Lipschitz constant") {
    auto g = make_log_grid(0.2, 4.0, 300);
    auto rad = testutil::radial_mode(g, 0, 0, [](double r) { return bump(r, 0.5, 2.0); });
    const auto c1 = loglip_modulus(rad, 400, 3).constant;
    const auto c2 = loglip_modulus(rad, 800, 3).constant;
    CHECK(c1 > 0.0);
    CHECK(std::abs(c2 - c1) / c1 < 0.2);
    // antipodal points at radius r: |dv| = 2 v_alpha(r), |x - y| = 2r
    const auto rep = loglip_modulus(rad, 800, 3);
    const auto va = solver_for(g)->radial_velocity_profile(rad.row(0));
    double antipodal = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double r = g->node(i);
      if (r < rep.r_inner || r > rep.r_outer) continue;
      antipodal = std::max(antipodal, va[i] / (r * (1.0 + std::log(rep.r_outer / (2.0 * r)))));
    }
    CHECK(c2 >= 0.5 * antipodal);
    PolarField z(g, 0);
    CHECK(loglip_modulus(z, 10, 1).constant == 0.0);
  }

  TEST_CASE("sup of v_r on the support") {
    auto g = make_log_grid(0.2, 4.0, 300);
    auto f = testutil::radial_mode(g, 8, 8, [](double r) { return 0.5 * bump(r, 1.0, 2.0); }, 8);
    const double s = vr_linf_periodic(f);
    CHECK(s > 0.0);
    CHECK(vr_linf_periodic(2.0 * f) == doctest::Approx(2.0 * s).epsilon(1e-12));
    auto rad = testutil::radial_mode(g, 8, 0, [](double r) { return bump(r, 1.0, 2.0); }, 8);
    CHECK(vr_linf_periodic(rad) == 0.0);
    CHECK_THROWS_AS(vr_linf_periodic(with_symmetry(f, std::nullopt)), std::logic_error);
  }
}
