#include "eulerinf/bessel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace eulerinf {

namespace {

// Beyond this the Hankel asymptotic series reaches rounding before its
// terms start to grow.
constexpr double kAsymptotic = 25.0;

double asymptotic(double nu, double x) {
  const double mu = 4.0 * nu * nu;
  double p = 0.0, q = 0.0, a = 1.0;
  for (int k = 0; k < 40; ++k) {
    // a = a_k(nu) / x^k
    const double term = (k / 2) % 2 == 0 ? a : -a;
    if (k % 2 == 0) p += term; else q += term;
    const double odd = 2.0 * k + 1.0;
    const double next = a * (mu - odd * odd) / ((k + 1.0) * 8.0 * x);
    if (std::abs(next) < 1e-17 * std::abs(p) || std::abs(next) > std::abs(a)) break;
    a = next;
  }
  const double chi = x - (0.5 * nu + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

void bessel_j_array(int n, double x, std::span<double> out) {
  if (n < 0 || out.size() < static_cast<std::size_t>(n) + 1) throw std::invalid_argument("bessel: bad order");
  if (x < 0.0) throw std::invalid_argument("bessel: negative argument");
  if (x == 0.0) {
    out[0] = 1.0;
    for (int k = 1; k <= n; ++k) out[k] = 0.0;
    return;
  }
  if (x <= 1.0) {
    // power series: terms shrink at least 4x per step, no cancellation issue
    const double h = 0.5 * x;
    double lead = 1.0;
    for (int k = 0; k <= n; ++k) {
      if (k > 0) lead *= h / k;
      double term = 1.0, sum = 0.0;
      for (int m = 0; m < 30 && std::abs(term) > 1e-18 * std::abs(sum); ++m) {
        sum += term;
        term *= -h * h / ((m + 1.0) * (m + 1.0 + k));
      }
      out[k] = lead * sum;
    }
    return;
  }
  if (x > n && x > kAsymptotic) {
    out[0] = asymptotic(0.0, x);
    if (n == 0) return;
    out[1] = asymptotic(1.0, x);
    for (int k = 1; k < n; ++k) out[k + 1] = 2.0 * k / x * out[k] - out[k - 1];
    return;
  }
  // Start well above both n and x; the start index must be even for the
  // normalization sum below.
  int start = n + 16 + static_cast<int>(std::sqrt(40.0 * (n + x)));
  start += start % 2;
  double jp1 = 0.0, j = 1e-300, norm = 0.0;
  for (int k = start; k > 0; --k) {
    const double jm1 = 2.0 * k / x * j - jp1;
    jp1 = j;
    j = jm1;
    if (k - 1 <= n) out[k - 1] = j;
    if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * j;
    // rescale to stay in range
    if (std::abs(j) > 1e250) {
      j *= 1e-250;
      jp1 *= 1e-250;
      norm *= 1e-250;
      for (int m = k - 1; m <= n; ++m) out[m] *= 1e-250;
    }
  }
  norm += j;  // J_0 term
  const double inv = 1.0 / norm;
  for (int k = 0; k <= n; ++k) out[k] *= inv;
}

double bessel_j(int n, double x) {
  std::vector<double> v(static_cast<std::size_t>(n) + 1);
  bessel_j_array(n, x, v);
  return v[n];
}

}  // namespace eulerinf
