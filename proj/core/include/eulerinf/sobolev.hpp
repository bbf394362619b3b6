#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "eulerinf/polar_field.hpp"
#include "eulerinf/profiles.hpp"

namespace eulerinf {

// Convention throughout:
//   ||f||^2_{H^s dot} = (2 pi)^{-2} int |xi|^{2s} |f^(xi)|^2 dxi,
//   f^(xi) = int f(x) e^{-i xi.x} dx,
// and the inhomogeneous norm uses (1 + |xi|^2)^s instead of |xi|^{2s}.

enum class SobolevMethod { hankel, cartesian, slobodeckij };

struct SobolevSpec {
  double s = 0.5;
  SobolevMethod method = SobolevMethod::hankel;
  bool homogeneous = true;
  /// hankel: relative tolerance for the tail of the rho integral.
  double rel_tol = 1e-11;
  /// cartesian: lattice spacing (0 = support diameter / 256) and box half
  /// width (at least 4 support diameters, leaving a margin of 3.5 diameters).
  double lattice_h = 0.0;
  double box_half_width = 0.0;
  /// slobodeckij: lattice points across the support box.
  std::size_t slob_points = 64;
};

std::string to_string(SobolevMethod m);
SobolevMethod method_from_string(const std::string& s);
/// Throws std::invalid_argument for s outside (-1, 1], or slobodeckij outside (0, 1).
void validate(const SobolevSpec& spec);

/// A compactly supported function on the plane with a disk containing its support.
struct PlanarPiece {
  std::function<double(double, double)> f;
  double cx = 0.0;
  double cy = 0.0;
  double radius = 0.0;
};

/// Polar field translated to (cx, cy); radius from its support annulus.
PlanarPiece planar(const PolarField& field, double cx = 0.0, double cy = 0.0,
                   double threshold = 1e-14);

double norm(const PolarField& field, const SobolevSpec& spec);
double norm_squared(const PolarField& field, const SobolevSpec& spec);

/// Norm of sum_j pieces_j; cartesian or slobodeckij only.
double norm(std::span<const PlanarPiece> pieces, const SobolevSpec& spec);

/// H_k[c](rho) = int c(r) J_k(rho r) r dr for nodal data on the grid.
cplx hankel_transform(const RadialGrid& grid, std::span<const cplx> c, int k, double rho);

/// Slobodeckij constant with the Fourier convention above:
/// 4^s Gamma(1+s) / (2 pi |Gamma(-s)|).
double slobodeckij_constant(double s);
/// The same constant obtained by running the lattice double integral on the
/// Gaussian e^{-|x|^2/2} and matching pi Gamma(1+s); cached per (s, points).
double slobodeckij_constant_calibrated(double s, std::size_t points);

struct NegNormRow {
  double k;
  double norm;
};
struct NegNormTable {
  std::vector<NegNormRow> rows;
  std::optional<double> slope;  // d log norm / d log K
};

/// ||g(r) cos(N a - K f(r) + f_err(r))||_{H^{-eta} dot} for each K.
NegNormTable neg_norm_scan(const RadialProfile& g, const std::function<double(double)>& phase,
                           std::span<const double> k_list, int n, double eta,
                           const std::function<double(double)>& phase_err = {});

struct InterpolationCheck {
  double lhs = 0.0;  // ||f||_{H^r}
  double rhs = 0.0;  // ||f||_{H^s}^theta ||f||_{H^q}^{1-theta}
  bool holds = true;  // lhs <= (1 + 1e-3) rhs
};
InterpolationCheck interpolation_check(const PolarField& field, double q, double r, double s);

struct SuperadditivityCheck {
  double whole = 0.0;            // ||sum f_j||
  double sum_of_norms = 0.0;     // sum ||f_j||
  double sum_of_squares = 0.0;   // sum ||f_j||^2
  double margin = 0.0;           // whole - sum_of_norms
  double relative_margin = 0.0;  // margin / sum_of_norms
  /// whole^2 - sum_of_squares: the cross terms, -4 C_s sum int int f_i f_j / |x-y|^{2+2s}
  double cross_terms = 0.0;
  double min_distance = 0.0;
};
/// Throws std::invalid_argument when the support disks overlap.
SuperadditivityCheck superadditivity_check(std::span<const PlanarPiece> pieces, const SobolevSpec& spec);

}  // namespace eulerinf
