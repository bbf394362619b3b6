#pragma once

#include <string>
#include <utility>
#include <vector>

namespace eulerinf {

/// amplitude * exp(1 - 1/(1 - u^2)) on (lo, hi), u the affine map to (-1, 1).
/// Peak value equals the amplitude.
struct Bump {
  double lo = 0.5;
  double hi = 4.0;
  double amplitude = 1.0;

  double operator()(double r) const;
  double derivative(double r) const;
};

/// Finite sum of bumps. Closed under r -> lambda r and scalar multiples,
/// which is all the construction needs.
class RadialProfile {
 public:
  RadialProfile() = default;
  explicit RadialProfile(std::vector<Bump> pieces) : pieces_(std::move(pieces)) {}

  double operator()(double r) const;
  double derivative(double r) const;

  /// r -> c * p(lambda r)
  RadialProfile rescaled(double lambda, double c = 1.0) const;
  RadialProfile operator*(double c) const { return rescaled(1.0, c); }

  const std::vector<Bump>& pieces() const { return pieces_; }
  bool empty() const;
  /// Union hull of the piece supports (0, 0 when empty).
  std::pair<double, double> hull() const;
  /// Disjoint support components sorted by radius.
  std::vector<std::pair<double, double>> components() const;

  /// int p(r) r dr (dense Gauss-Legendre per piece).
  double radial_moment() const;
  /// int |p|^2 r dr and int |p'|^2 r dr on the plane, divided by 2 pi.
  double l2_squared() const;
  double grad_squared() const;
  /// H^1 norm on R^2 of the radial function x -> p(|x|).
  double h1_norm() const;

 private:
  std::vector<Bump> pieces_;
};

}  // namespace eulerinf
