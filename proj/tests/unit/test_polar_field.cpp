#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "doctest.h"
#include "eulerinf/polar_field.hpp"
#include "test_util.hpp"

using namespace eulerinf;
using testutil::bump;

namespace {

constexpr double kPi = std::numbers::pi;

PolarField random_field(GridPtr g, int k_max, std::uint64_t seed, std::optional<int> sym = {}) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  PolarField f(g, k_max, sym);
  for (std::size_t j = 0; j < f.rows(); ++j) {
    const double a = nd(rng), b = nd(rng), c = 1.0 + 0.5 * std::abs(nd(rng));
    auto row = f.row(j);
    for (std::size_t i = 0; i < f.n_r(); ++i) {
      const double r = g->node(i);
      row[i] = cplx(a, j == 0 ? 0.0 : b) * bump(r, 0.5, 0.5 + 2.0 * c);
    }
  }
  return f;
}

}  // namespace

TEST_SUITE("polar_field") {
  TEST_CASE("synthesis of simple harmonics") {
    auto g = make_log_grid(0.1, 4.0, 64);
    auto c = testutil::radial_mode(g, 4, 0, [](double) { return 1.0; });
    CHECK(synthesize(c, 1.0, 0.7) == doctest::Approx(1.0).epsilon(1e-14));
    auto e1 = testutil::radial_mode(g, 4, 1, [](double) { return 1.0; });
    CHECK(synthesize(e1, 1.0, 0.0) == doctest::Approx(2.0).epsilon(1e-14));
  }

  TEST_CASE("gaussian times cos(3a) evaluates at a node of cos") {
    auto g = make_log_grid(0.01, 5.0, 256);
    auto f = testutil::radial_mode(g, 4, 3, [](double r) { return 0.5 * std::exp(-r * r); });
    CHECK(std::abs(synthesize(f, 0.5, kPi / 6.0)) < 1e-10);
    // and off the nodal line it matches the expression to interpolation accuracy
    CHECK(synthesize(f, 0.5, 0.1) == doctest::Approx(std::exp(-0.25) * std::cos(0.3)).epsilon(1e-6));
  }

  TEST_CASE("radii outside the grid") {
    auto g = make_log_grid(0.2, 3.0, 40);
    auto f = testutil::radial_mode(g, 2, 0, [](double) { return 1.0; });
    CHECK(synthesize(f, 0.1, 0.0) == 0.0);
    CHECK_THROWS_AS(synthesize(f, 3.5, 0.0), std::domain_error);
  }

  TEST_CASE("analyze recovers single harmonics and constants") {
    auto g = make_log_grid(0.5, 4.0, 32);
    const std::size_t m = 32;
    const int n = 5;
    std::vector<double> s(g->size() * m), c(g->size() * m, 3.0);
    for (std::size_t i = 0; i < g->size(); ++i)
      for (std::size_t q = 0; q < m; ++q)
        s[i * m + q] = bump(g->node(i), 1.0, 3.0) * std::cos(n * 2.0 * kPi * q / m);
    auto f = analyze(g, s, m, 10);
    auto k = analyze(g, c, m, 10);
    for (int kk = 0; kk <= 10; ++kk) {
      for (std::size_t i = 0; i < g->size(); ++i) {
        const double expect = kk == n ? 0.5 * bump(g->node(i), 1.0, 3.0) : 0.0;
        CHECK(std::abs(f.mode(kk, i) - expect) < 1e-14);
        CHECK(std::abs(k.mode(kk, i) - (kk == 0 ? 3.0 : 0.0)) < 1e-13);
      }
    }
  }

  TEST_CASE("aliasing is reported") {
    auto g = make_log_grid(0.5, 4.0, 16);
    std::vector<double> s(g->size() * 16, 0.0);
    CHECK_THROWS_AS(analyze(g, s, 16, 8), std::invalid_argument);
    CHECK_NOTHROW(analyze(g, s, 16, 7));
  }

  TEST_CASE("synthesize/analyze round trip on random band-limited fields") {
    auto g = make_log_grid(0.3, 6.0, 48);
    const int k_max = 12;
    auto f = random_field(g, k_max, 7);
    const std::size_t m = 2 * k_max + 2;
    std::vector<double> s(g->size() * m);
    for (std::size_t i = 0; i < g->size(); ++i)
      for (std::size_t q = 0; q < m; ++q) s[i * m + q] = synthesize(f, g->node(i), 2.0 * kPi * q / m);
    auto back = analyze(g, s, m, k_max);
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < f.coeffs().size(); ++t) {
      num += std::norm(back.coeffs()[t] - f.coeffs()[t]);
      den += std::norm(f.coeffs()[t]);
    }
    CHECK(std::sqrt(num / den) < 1e-12);
  }

  TEST_CASE("physical samples are real and match pointwise synthesis") {
    auto g = make_log_grid(0.3, 6.0, 40);
    auto f = random_field(g, 9, 3, 3);
    const std::size_t m = default_samples(f);
    const auto v = to_physical(f, m);
    for (std::size_t i = 0; i < g->size(); i += 7)
      for (std::size_t q = 0; q < m; q += 3) {
        const double alpha = 2.0 * kPi * q / (m * 3.0);
        CHECK(v[i * m + q] == doctest::Approx(synthesize(f, g->node(i), alpha)).epsilon(1e-12));
      }
  }

  TEST_CASE("angular average keeps only the mean") {
    auto g = make_log_grid(0.3, 6.0, 40);
    auto osc = testutil::radial_mode(g, 8, 4, [](double r) { return bump(r, 1.0, 2.0); });
    CHECK(angular_average(osc).is_zero());
    auto rad = testutil::radial_mode(g, 8, 0, [](double r) { return bump(r, 1.0, 2.0); });
    auto a = angular_average(rad);
    for (std::size_t i = 0; i < g->size(); ++i) CHECK(a.mode(0, i) == rad.mode(0, i));
  }

  TEST_CASE("L infinity of a unit-height annular bump") {
    auto g = make_log_grid(0.5, 3.0, 400);
    auto f = testutil::radial_mode(g, 4, 0, [](double r) { return bump(r, 1.0, 2.0); });
    CHECK(std::abs(lp_norm(f, INFINITY) - 1.0) < 1e-3);
  }

  TEST_CASE("L1 and L infinity against dense angular quadrature") {
    // f = b(r) (0.3 + cos 3a + 0.4 sin 6a): sign changes at every radius
    auto g = make_log_grid(0.5, 3.0, 200);
    PolarField f(g, 6);
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double b = bump(g->node(i), 1.0, 2.0);
      f.row(0)[i] = 0.3 * b;
      f.row(3)[i] = 0.5 * b;
      f.row(6)[i] = cplx(0.0, -0.2 * b);
    }
    const int m = 400000;
    double l1 = 0.0, linf = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
      const double b = bump(g->node(i), 1.0, 2.0);
      double acc = 0.0;
      for (int q = 0; q < m; ++q) {
        const double a = 2.0 * std::numbers::pi * q / m;
        const double v = b * (0.3 + std::cos(3.0 * a) + 0.4 * std::sin(6.0 * a));
        acc += std::abs(v);
        linf = std::max(linf, std::abs(v));
      }
      l1 += g->weights()[i] * acc * 2.0 * std::numbers::pi / m;
    }
    CHECK(lp_norm(f, 1.0) == doctest::Approx(l1).epsilon(1e-9));
    CHECK(lp_norm(f, INFINITY) == doctest::Approx(linf).epsilon(1e-9));
    for (double c : {0.1, 0.77, 2.0}) {
      const auto r = rotate(f, c);
      CHECK(lp_norm(r, 1.0) == doctest::Approx(lp_norm(f, 1.0)).epsilon(1e-12));
      CHECK(lp_norm(r, INFINITY) == doctest::Approx(lp_norm(f, INFINITY)).epsilon(1e-12));
    }
  }

  TEST_CASE("L2 norm of the oscillatory ansatz scales like (lambda N)^-beta") {
    const double beta = 0.5;
    auto g = make_log_grid(0.05, 5.0, 600);
    auto norm = [&](double lam, int n) {
      auto f = testutil::radial_mode(g, n, n, [&](double r) {
        return 0.5 * std::pow(lam, 1.0 - beta) * std::pow(n, -beta) * bump(lam * r, 0.5, 4.0);
      }, n);
      return lp_norm(f, 2.0);
    };
    CHECK(norm(4.0, 16) / norm(2.0, 8) == doctest::Approx(std::pow(2.0, -2.0 * beta)).epsilon(1e-2));
  }

  TEST_CASE("zero field") {
    auto g = make_log_grid(0.3, 6.0, 40);
    PolarField z(g, 6);
    for (double p : {1.0, 2.0, 3.5, double(INFINITY)}) CHECK(lp_norm(z, p) == 0.0);
    CHECK_FALSE(support_annulus(z, 1e-12).has_value());
  }

  TEST_CASE("support annulus tracks the scaled profile") {
    auto g = make_log_grid(0.05, 5.0, 800);
    auto f = testutil::radial_mode(g, 8, 8, [](double r) { return bump(2.0 * r, 0.5, 4.0); }, 8);
    auto s = support_annulus(f, 1e-12);
    REQUIRE(s);
    CHECK(s->first == doctest::Approx(0.25).epsilon(0.02));
    CHECK(s->second == doctest::Approx(2.0).epsilon(0.02));
  }

  TEST_CASE("Parseval: mode energy equals L2 squared over 2 pi") {
    auto g = make_log_grid(0.3, 6.0, 60);
    auto f = random_field(g, 10, 11);
    const double l2 = lp_norm(f, 2.0);
    CHECK(mode_energy(f) == doctest::Approx(l2 * l2 / (2.0 * kPi)).epsilon(1e-8));
  }

  TEST_CASE("symmetry survives add, scale and average") {
    auto g = make_log_grid(0.3, 6.0, 40);
    auto a = random_field(g, 12, 1, 4);
    auto b = random_field(g, 12, 2, 4);
    CHECK((a + b).symmetry() == 4);
    CHECK((2.5 * a).symmetry() == 4);
    CHECK(angular_average(a).symmetry() == 4);
    auto c = random_field(g, 12, 3, 6);
    CHECK((a + c).symmetry() == 2);
    auto d = a + c;
    for (std::size_t i = 0; i < g->size(); ++i)
      CHECK(d.mode(4, i) == a.mode(4, i));
  }

  TEST_CASE("rotation is a phase shift that keeps every norm") {
    auto g = make_log_grid(0.3, 6.0, 60);
    auto f = random_field(g, 6, 5);
    auto r = rotate(f, 0.37);
    CHECK(synthesize(r, 1.3, 1.0) == doctest::Approx(synthesize(f, 1.3, 1.0 - 0.37)).epsilon(1e-12));
    CHECK(lp_norm(r, 2.0) == doctest::Approx(lp_norm(f, 2.0)).epsilon(1e-12));
  }

  TEST_CASE("radial derivative is fourth order") {
    auto err = [](std::size_t n) {
      const auto g = RadialGrid::log_uniform(0.5, 3.0, n);
      std::vector<double> y(n), d(n);
      for (std::size_t i = 0; i < n; ++i) y[i] = std::sin(2.0 * g.node(i));
      radial_derivative(g, y, d);
      double e = 0.0;
      for (std::size_t i = 0; i < n; ++i) e = std::max(e, std::abs(d[i] - 2.0 * std::cos(2.0 * g.node(i))));
      return e;
    };
    CHECK(err(40) / err(80) > 12.0);
  }

  TEST_CASE("monotone interpolation does not overshoot") {
    auto g = make_log_grid(0.5, 3.0, 30);
    std::vector<double> y(g->size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = g->node(i) < 1.5 ? 0.0 : 1.0;
    for (double r = 0.5; r < 3.0; r += 0.0137) {
      const double v = interpolate(*g, y, r);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
    }
  }
}
