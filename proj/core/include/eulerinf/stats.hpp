#pragma once

#include <cstddef>
#include <optional>
#include <span>

namespace eulerinf {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;    // 0 when only two points
  double slope_ci95 = 0.0;      // half-width, Student t; 0 when only two points
  std::size_t n = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs two distinct x.
std::optional<LinearFit> ols(std::span<const double> x, std::span<const double> y);

}  // namespace eulerinf
