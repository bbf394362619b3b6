#include "eulerinf/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <stdexcept>

namespace eulerinf {

std::optional<LinearFit> ols(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("ols: size mismatch");
  const std::size_t n = x.size();
  if (n < 2) return std::nullopt;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 0.0)) return std::nullopt;
  LinearFit fit;
  fit.n = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  if (n > 2) {
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y[i] - fit.intercept - fit.slope * x[i];
      sse += e * e;
    }
    const double dof = static_cast<double>(n - 2);
    fit.slope_stderr = std::sqrt(sse / dof / sxx);
    boost::math::students_t dist(dof);
    fit.slope_ci95 = boost::math::quantile(boost::math::complement(dist, 0.025)) * fit.slope_stderr;
  }
  return fit;
}

}  // namespace eulerinf
