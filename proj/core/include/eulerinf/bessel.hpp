#pragma once

#include <span>

namespace eulerinf {

/// J_0(x) .. J_{n}(x) into out[0..n] for x >= 0.
///
/// For x <= n: Miller's downward recurrence normalized with
/// J_0 + 2 sum J_{2m} = 1. For x > n the upward recurrence from J_0, J_1 is
/// stable and cheaper, so it is used there.
void bessel_j_array(int n, double x, std::span<double> out);

/// Single order, same method.
double bessel_j(int n, double x);

}  // namespace eulerinf
