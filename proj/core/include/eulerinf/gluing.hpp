#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "eulerinf/construction.hpp"
#include "eulerinf/evolve.hpp"
#include "eulerinf/sobolev.hpp"

namespace eulerinf {

/// One glued piece: omega~_j(x, t) = omega_j(x - R_j, t / 2^j) / 2^j, with the
/// base field omega_j evolved on its own grid in local time t / 2^j.
struct PieceRun {
  GluingPiece piece;
  RunResult local;              // base field, local time
  std::vector<double> t;        // physical monitor times
  std::vector<PolarField> snapshots;  // omega~_j at those times, centred at 0
  std::vector<double> v_sup;    // sup |v[omega~_j]| at those times
  std::vector<double> support_radius;  // outer support radius at those times
  double v_max = 0.0;           // max of v_sup
  /// outer support radius never exceeded initial radius + v_max t (+ one cell).
  bool support_within_margin = true;
};

/// `physical` sets t_end, monitor_dt (required > 0) and step controls in
/// physical time; each piece uses them divided by its time dilation. Pieces
/// run on `workers` threads.
std::vector<PieceRun> run_pieces(const GluedData& glued, const EvolveConfig& physical, std::size_t workers = 1);

/// sup |v| over the grid samples of the Biot-Savart velocity of omega.
double velocity_sup(const PolarField& omega);

/// || evolve(omega0 / a, a t) * a - evolve(omega0, t) ||_L2 / || evolve(omega0, t) ||_L2
double scaling_identity_error(const PolarField& omega0, double t, double a, const EvolveConfig& cfg = {});

struct FarFieldCheck {
  double distance = 0.0;    // probe distance to the source support
  double probe_radius = 0.0;  // |x| of the probe: support radius + distance
  double l1 = 0.0;          // ||omega||_L1
  double bound = 0.0;       // l1 / (2 pi distance)
  double quadrature = 0.0;  // |v| by direct kernel quadrature
  double mode_solver = 0.0; // |v| from the mode solver's exterior expansion
};

/// Velocity of `source` (centred at 0) at (support radius + distance, angle).
FarFieldCheck far_field_check(const PolarField& source, double distance, double angle = 0.0);

struct PairInteraction {
  int source = 0;  // piece index j
  int target = 0;
  double distance = 0.0;       // between support disks; <= 0 means overlap
  double far_field_bound = 0.0;  // ||omega~_source||_L1 / (2 pi distance)
  double cross_velocity = 0.0;   // max |v[omega~_source]| on the target disk (mode solver)
  double cross_quadrature = 0.0; // same by direct kernel quadrature
  double self_velocity = 0.0;    // sup |v[omega~_target]|
  double ratio = 0.0;            // cross_velocity / self_velocity
  double bound_ratio = 0.0;      // far_field_bound / self_velocity
  bool overlap = false;
};

/// All ordered pairs at monitor index `k` (common to every run). Empty for a
/// single piece.
std::vector<PairInteraction> interaction_bound(const GluingPlan& plan, const std::vector<PieceRun>& runs,
                                               std::size_t k);

struct GluedBound {
  std::vector<double> piece_norms;
  double sum_of_norms = 0.0;  // sum_j ||omega~_j||, valid under superadditivity
  double max_single = 0.0;
  /// sqrt(sum ||f_j||^2 - sum_{i<j} 4 C_s ||f_i||_L1 ||f_j||_L1 / d_ij^{2+2s}):
  /// holds for disjoint supports without superadditivity. 0 when negative.
  double orthogonal_bound = 0.0;
  double cross_bound = 0.0;
  double min_distance = 0.0;
  bool disjoint = true;  // false: no certificate (all bounds left at 0)
};

/// Lower bounds on ||sum_j omega~_j||_{H^s dot} at monitor index k. The cross
/// bound needs s in (0, 1).
GluedBound glued_norm_lower_bound(const GluingPlan& plan, const std::vector<PieceRun>& runs, std::size_t k,
                                  const SobolevSpec& spec);

}  // namespace eulerinf
