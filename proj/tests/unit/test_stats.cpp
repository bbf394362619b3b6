#include <cmath>
#include <vector>

#include "doctest.h"
#include "eulerinf/stats.hpp"

using namespace eulerinf;

TEST_SUITE("stats") {
  TEST_CASE("exact line") {
    const std::vector<double> x{1, 2, 3, 4}, y{3, 5, 7, 9};
    const auto f = ols(x, y);
    REQUIRE(f);
    CHECK(f->slope == doctest::Approx(2.0));
    CHECK(f->intercept == doctest::Approx(1.0));
    CHECK(f->slope_stderr == doctest::Approx(0.0).scale(1.0));
    CHECK(f->n == 4);
  }

  TEST_CASE("standard error and Student interval") {
    const std::vector<double> x{0, 1, 2, 3}, y{0.1, 0.9, 2.2, 2.8};
    const auto f = ols(x, y);
    REQUIRE(f);
    // hand computation: Sxx = 5, Sxy = 4.7, residual SS = 0.082
    CHECK(f->slope == doctest::Approx(0.94).epsilon(1e-12));
    const double se = std::sqrt(0.082 / 2.0 / 5.0);
    CHECK(f->slope_stderr == doctest::Approx(se).epsilon(1e-10));
    CHECK(f->slope_ci95 == doctest::Approx(4.302652729911275 * se).epsilon(1e-9));
  }

  TEST_CASE("degenerate input") {
    const std::vector<double> x{1, 1, 1}, y{1, 2, 3};
    CHECK_FALSE(ols(x, y));
    const std::vector<double> one{1};
    CHECK_FALSE(ols(one, one));
    const std::vector<double> x2{1, 2}, y2{1, 4};
    const auto f = ols(x2, y2);
    REQUIRE(f);
    CHECK(f->slope == doctest::Approx(3.0));
    CHECK(f->slope_ci95 == 0.0);
  }
}
