#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "eulerinf/polar_field.hpp"
#include "eulerinf/profiles.hpp"

namespace eulerinf {

/// Thrown when a grid cannot resolve the requested supports.
class ResolutionError : public std::runtime_error {
 public:
  ResolutionError(const std::string& what, std::size_t required_nodes)
      : std::runtime_error(what), required_nodes_(required_nodes) {}
  std::size_t required_nodes() const { return required_nodes_; }

 private:
  std::size_t required_nodes_;
};

/// Oscillatory profile: one bump, by default scaled to a target H^1 norm.
struct GSpec {
  double lo = 0.5;
  double hi = 4.0;
  std::optional<double> amplitude;  // overrides the H^1 scaling
  double h1_target = 0.049;
  double h1_limit = 0.05;
};

/// Radial profile c (-l^2 F(l r) + l^-2 F(r / l)) with F a unit bump on
/// (tilde_lo, tilde_hi) and l = lambda0. Zero radial moment by construction.
struct FSpec {
  double tilde_lo = 0.5;
  double tilde_hi = 2.0;
  double lambda0 = 33.0;
  std::optional<double> amplitude;  // c; default scales to h1_target
  double h1_target = 0.049;
  double h1_limit = 0.05;
  std::optional<double> m_limit;  // optional cap on the measured M
};

/// d_r (v_alpha[f] / r) over [lo, hi], normalized by its sign.
struct MonotonicityWindow {
  double lo = 0.5;
  double hi = 4.0;
  int sign = 0;
  bool sign_definite = false;
  double min_value = 0.0;
  double max_value = 0.0;
  double m = 0.0;  // smallest M with every value in [1/M, M]
};

struct ProfileReport {
  bool valid = true;
  double h1_norm = 0.0;
  double radial_moment = 0.0;  // int p r dr
  double moment_scale = 0.0;   // sum over pieces of |int p_j r dr|
  std::pair<double, double> support{0.0, 0.0};
  std::optional<MonotonicityWindow> window;  // f only
  std::vector<std::string> failures;
  std::vector<std::string> notes;  // deviations that do not invalidate
};

struct BuiltProfile {
  RadialProfile profile;
  ProfileReport report;
};

BuiltProfile build_g(const GSpec& spec = {});
BuiltProfile build_f(const FSpec& spec = {});

/// Sign-normalized window of d_r(v_alpha[f]/r), using the k = 0 solver.
MonotonicityWindow monotonicity_window(const RadialProfile& f, double lo = 0.5, double hi = 4.0);

struct ScalingLaw {
  int n = 1;
  double n_exact = 1.0;  // lambda^{(2 - 2 beta + delta) / beta}
  double residual = 0.0;  // n - n_exact
  double beta_critical = 0.0;  // (2 - beta) beta / (2 - beta^2)
  double beta_delta = 0.0;     // (2 + delta - beta) beta / (2 + delta - beta^2)
};

/// Throws std::invalid_argument outside beta in (0,1), delta > 0, lambda >= 1
/// and std::overflow_error when N would not fit an int.
ScalingLaw scaling_law(double beta, double delta, double lambda);
double beta_critical(double beta);
double beta_delta(double beta, double delta);

struct GridSpec {
  double nodes_per_decade = 160.0;
  int k_factor = 3;      // k_max = k_factor * N
  double margin = 1.25;  // grid extends the supports by this factor
  std::size_t min_support_nodes = 32;
};

struct ConstructionParams {
  double beta = 0.5;
  double delta = 0.05;
  double lambda = 4.0;
  std::optional<int> n_override;  // breaks the scaling law; residual recorded
  FSpec f;
  GSpec g;
  GridSpec grid;
  std::optional<double> beta_target;  // beta' for the beta_delta < beta' check
};

struct InitialData {
  ConstructionParams params;
  ScalingLaw law;
  int n = 1;
  BuiltProfile f;
  BuiltProfile g;
  PolarField omega;        // radial + oscillatory
  PolarField radial;       // k = 0: lambda^{1-beta} f(lambda r)
  PolarField oscillatory;  // k = N: lambda^{1-beta} N^{-beta} g(lambda r) / 2
  double h_beta_norm = 0.0;
  double circulation = 0.0;  // int omega dx
  double l1 = 0.0;
  bool valid = true;
  std::vector<std::string> failures;
};

/// Log grid covering the scaled supports; throws ResolutionError when the
/// density cannot put min_support_nodes in every support component.
GridPtr construction_grid(const ConstructionParams& p, const RadialProfile& f, const RadialProfile& g);

/// lambda^{1-beta} f(lambda r) on the k = 0 row and the N-mode of
/// lambda^{1-beta} N^{-beta} g(lambda r) cos(N (alpha - phase(r))).
/// `phase` is per node (empty means zero).
PolarField initial_field(const GridPtr& grid, const RadialProfile& f, const RadialProfile& g, double lambda,
                         double beta, int n, int k_max, std::span<const double> phase = {});
PolarField radial_part(const GridPtr& grid, const RadialProfile& f, double lambda, double beta, int n, int k_max);
PolarField oscillatory_part(const GridPtr& grid, const RadialProfile& g, double lambda, double beta, int n,
                            int k_max, std::span<const double> phase = {});

InitialData assemble_initial(const ConstructionParams& params);

struct GluingPiece {
  int j = 1;
  double center = 0.0;      // R_j on the x axis
  double half_sep = 0.0;    // D_j
  double amplitude = 1.0;   // 2^{-j}
  double time_dilation = 1.0;  // 2^j
};

struct GluingPlan {
  double v_max = 0.0;
  double support_radius = 1.0;
  std::vector<GluingPiece> pieces;
  int size() const { return static_cast<int>(pieces.size()); }
  /// Smallest distance between support disks at t = 0.
  double min_gap() const;
};

/// D_j = 4^j (v_max + 1) + 2 rho, R_1 = 0, R_{j+1} = R_j + D_j + D_{j+1}.
/// With rho = 1 this is the floor 4^j (v_max + 1) + 2.
GluingPlan plan_gluing(int pieces, double v_max, double support_radius = 1.0);
/// Checks the recurrence, the D floor and disjointness; returns failures.
std::vector<std::string> check_plan(const GluingPlan& plan);

struct GluedData {
  GluingPlan plan;
  std::vector<InitialData> pieces;  // local fields, centred at (R_j, 0)
};

/// One piece per entry of `piece_params`; the support radius of the plan is
/// the largest outer support radius among the pieces.
GluedData assemble_gluing(std::span<const ConstructionParams> piece_params, double v_max);

}  // namespace eulerinf
