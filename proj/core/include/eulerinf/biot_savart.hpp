#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <vector>

#include "eulerinf/polar_field.hpp"
#include "eulerinf/profiles.hpp"

namespace eulerinf {

/// Per-mode stream function and velocity, same layout as the vorticity.
/// Velocity normalization: curl v = omega, -Laplace psi = omega,
/// v_r = (1/r) d_alpha psi, v_alpha = -d_r psi.
struct VelocityModes {
  PolarField psi;
  PolarField vr;
  PolarField valpha;
  /// r^{-k} int_0^{r_max} s^{k+1} omega_k ds per row, scaled by r_max^k;
  /// outside r_max each mode decays like far_moment * (r_max / r)^k.
  std::vector<cplx> far_moment;
  /// r^{k} int_{r_min}^{r_max} s^{1-k} omega_k ds at r_min per row; inside
  /// r_min each mode grows like near_moment * (r / r_min)^k.
  std::vector<cplx> near_moment;
  /// Vorticity still present at r_max (outer integrals truncated there).
  bool truncated = false;
  /// Crude bound on the velocity error caused by the truncation.
  double tail_estimate = 0.0;

  /// Cartesian velocity (v_x, v_y) at a point; beyond r_max the exterior
  /// multipole expansion is used.
  std::array<double, 2> cartesian(double x, double y) const;
  /// (v_r, v_alpha) at polar coordinates.
  std::array<double, 2> polar(double r, double alpha) const;
};

/// Mode-wise Green's-function solver bound to one radial grid. Interval
/// weights for each wavenumber are built on first use and cached.
class BiotSavart {
 public:
  explicit BiotSavart(GridPtr grid);

  VelocityModes solve(const PolarField& omega) const;
  /// Angular velocity v_alpha(r) = (1/r) int_0^r omega_0 s ds at the nodes.
  std::vector<double> radial_velocity_profile(std::span<const cplx> omega0) const;
  /// (A, B) accumulations for one mode row; see the source for definitions.
  void accumulate(int k, std::span<const cplx> omega_k, std::span<cplx> a, std::span<cplx> b) const;

  const GridPtr& grid() const { return grid_; }

 private:
  struct Weights {
    std::vector<std::array<double, 4>> inner;  // per interval, onto its stencil
    std::vector<std::array<double, 4>> outer;
  };
  const Weights& weights(int k) const;

  GridPtr grid_;
  std::vector<std::array<double, 4>> log_weights_;  // for psi_0
  mutable std::mutex mu_;
  mutable std::map<int, std::unique_ptr<Weights>> cache_;
};

/// Convenience wrapper; builds (and reuses per grid) a BiotSavart.
VelocityModes solve_velocity(const PolarField& omega);
std::shared_ptr<const BiotSavart> solver_for(const GridPtr& grid);

struct ProbeValue {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = true;
};

/// v_r(r, 0) for omega = g(r) sin(N alpha) by direct double quadrature of the
/// kernel integral, independent of the mode solver. Probes inside the support
/// use an excluded angular window with Richardson extrapolation.
std::vector<ProbeValue> vr_mode_formula(const RadialProfile& g, int n, std::span<const double> probes,
                                        std::size_t n_alpha = 0);

struct DecayRow {
  int n;
  double vr_max;
};
struct DecayTable {
  std::vector<DecayRow> rows;
  std::optional<double> slope;  // d log(max|v_r|) / dN
};

/// max_alpha |v_r| at r_probe for omega = g(r) cos(N alpha), over N.
DecayTable exp_decay_scan(const RadialProfile& g, double a1, double a2, std::span<const int> n_list,
                          double r_probe);

struct LogLipReport {
  double constant = 0.0;
  double r_outer = 0.0;
  double r_inner = 0.0;
  std::size_t pairs = 0;
};

/// Empirical constant in |dv| <= C ||w||_inf |x-y| (1 + log(R/|x-y|)) over
/// seeded random pairs in the support annulus.
LogLipReport loglip_modulus(const PolarField& omega, std::size_t sample_pairs, std::uint64_t seed,
                            double threshold = 1e-10);

/// sup |v_r| over the support annulus of a field with declared symmetry.
/// Throws std::logic_error when no symmetry is declared.
double vr_linf_periodic(const PolarField& omega, double threshold = 1e-10);

}  // namespace eulerinf
