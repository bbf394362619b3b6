#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "eulerinf/radial_grid.hpp"

namespace eulerinf {

using cplx = std::complex<double>;

/// Scalar field on the plane as a truncated angular Fourier series,
///   f(r, a) = f_0(r) + 2 Re sum_{k>=1} f_k(r) e^{i k a}.
///
/// With a declared symmetry N only the rows k = 0, N, 2N, ... are stored, so
/// the 2pi/N-periodicity holds exactly rather than to rounding. Coefficients
/// are row-major: row j (wavenumber j*stride) then radial node i.
class PolarField {
 public:
  PolarField() = default;
  PolarField(GridPtr grid, int k_max, std::optional<int> symmetry = std::nullopt);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  std::size_t n_r() const { return grid_ ? grid_->size() : 0; }
  int k_max() const { return k_max_; }
  std::optional<int> symmetry() const { return symmetry_; }
  int stride() const { return symmetry_.value_or(1); }
  std::size_t rows() const { return static_cast<std::size_t>(k_max_ / stride()) + 1; }
  int wavenumber(std::size_t row) const { return static_cast<int>(row) * stride(); }

  std::span<cplx> row(std::size_t j) { return {coeffs_.data() + j * n_r(), n_r()}; }
  std::span<const cplx> row(std::size_t j) const { return {coeffs_.data() + j * n_r(), n_r()}; }
  std::span<cplx> coeffs() { return coeffs_; }
  std::span<const cplx> coeffs() const { return coeffs_; }

  /// Coefficient of wavenumber k >= 0 at node i; zero when k is not stored.
  cplx mode(int k, std::size_t i) const;
  /// Row index of wavenumber k, if stored.
  std::optional<std::size_t> row_of(int k) const;

  bool same_layout(const PolarField& other) const;
  bool is_zero() const;

 private:
  GridPtr grid_;
  int k_max_ = 0;
  std::optional<int> symmetry_;
  std::vector<cplx> coeffs_;
};

struct PolarPoint {
  double r;
  double alpha;
};

/// Off-node radial interpolation of mode profiles. `monotone` is PCHIP in the
/// grid index; `smooth` is 6-point Lagrange (higher order, may ring at sharp
/// edges) and is what resampling onto Cartesian lattices uses.
enum class Interp { monotone, smooth };

/// Values at arbitrary points. r < r_min gives 0, r > r_max throws
/// std::domain_error.
std::vector<double> synthesize(const PolarField& field, std::span<const PolarPoint> points,
                               Interp interp = Interp::monotone);
double synthesize(const PolarField& field, double r, double alpha, Interp interp = Interp::monotone);

/// Mode profiles at one radius (row-indexed, same layout as the field).
std::vector<cplx> modes_at(const PolarField& field, double r, Interp interp = Interp::monotone);

/// Samples on grid nodes x uniform full-circle angles alpha_m = 2 pi m / n_alpha,
/// row-major [i][m]. Throws std::invalid_argument when n_alpha < 2 k_max + 2.
PolarField analyze(GridPtr grid, std::span<const double> samples, std::size_t n_alpha, int k_max,
                   std::optional<int> symmetry = std::nullopt);

/// Grid-node samples over one symmetry period: theta_m = 2 pi m / m_samples
/// in the reduced angle theta = stride * alpha. Row-major [i][m].
std::vector<double> to_physical(const PolarField& field, std::size_t m_samples);
/// Inverse of to_physical for the field's own layout (truncates to k_max).
void from_physical(PolarField& field, std::span<const double> samples, std::size_t m_samples);
/// Number of reduced-angle samples that resolves products of two fields exactly.
std::size_t default_samples(const PolarField& field, std::size_t refine = 1);

PolarField angular_average(const PolarField& field);
/// L^p norm on the plane. p = 2 is Parseval; p = 1 integrates the angular
/// series exactly between its roots; p = infinity polishes the sampled maximum
/// with Newton steps; other p use 4x refined angular samples.
double lp_norm(const PolarField& field, double p);
/// sum_k c_k int |f_k|^2 r dr with c_0 = 1, c_k = 2, i.e. ||f||_{L^2}^2 / (2 pi).
double mode_energy(const PolarField& field);
/// max over alpha of |f| at every node.
std::vector<double> radial_envelope(const PolarField& field);
/// Smallest [r_lo, r_hi] containing every node where max_alpha |f| > threshold.
std::optional<std::pair<double, double>> support_annulus(const PolarField& field,
                                                         double threshold);

/// f(a) -> f(a - c).
PolarField rotate(const PolarField& field, double c);
PolarField with_k_max(const PolarField& field, int k_max);
/// Re-layout on a different stride (must divide every stored wavenumber or
/// the dropped rows must vanish).
PolarField with_symmetry(const PolarField& field, std::optional<int> symmetry);

PolarField operator+(const PolarField& a, const PolarField& b);
PolarField operator-(const PolarField& a, const PolarField& b);
PolarField operator*(double s, const PolarField& a);
PolarField& operator+=(PolarField& a, const PolarField& b);
PolarField& operator*=(PolarField& a, double s);

/// d/dr of nodal data with 4th-order differences in the grid index.
void radial_derivative(const RadialGrid& grid, std::span<const cplx> in, std::span<cplx> out);
void radial_derivative(const RadialGrid& grid, std::span<const double> in, std::span<double> out);
PolarField radial_derivative(const PolarField& field);

/// Monotone cubic interpolation of nodal data at radius r (within the grid).
double interpolate(const RadialGrid& grid, std::span<const double> values, double r);

}  // namespace eulerinf
