#pragma once

#include <cstddef>
#include <vector>

#include "eulerinf/evolve.hpp"

namespace eulerinf {

struct InflationParams {
  double lambda = 4.0;
  double beta = 0.5;
  int n = 1;
};

struct InflationReport {
  double beta_prime = 0.5;
  std::vector<double> t;
  std::vector<double> measured;   // ||omega_osc(t)||_{H^beta' dot}
  /// Phase-gradient prediction: pseudo_hs_est_<beta'> from the monitor rows
  /// when present, else ||omega_osc||_L2 * kappa_rms^beta'.
  std::vector<double> predicted;
  /// ||omega_osc(0)||_L2 (N lambda^{2-beta} t)^beta', the asymptotic scale.
  std::vector<double> asymptotic;
  double growth_factor = 1.0;  // measured(t_end) / measured(0); 1 for a vanishing part
  /// measured increases strictly from the second monitor row on.
  bool monotone_after_transient = true;
  std::size_t first_decrease = 0;  // row index, 0 if none
  /// predicted / measured over rows with t > 0.
  double min_ratio = 1.0;
  double max_ratio = 1.0;
};

/// Needs beta_prime among rec.hs_orders; throws std::invalid_argument otherwise.
InflationReport inflation_measure(const TrajectoryRecord& rec, const InflationParams& p, double beta_prime);

}  // namespace eulerinf
