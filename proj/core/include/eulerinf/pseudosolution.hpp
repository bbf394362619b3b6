#pragma once

#include <string>
#include <vector>

#include "eulerinf/construction.hpp"
#include "eulerinf/evolve.hpp"

namespace eulerinf {

/// Stationary radial part plus the N-mode of g rotated by a radius-dependent
/// angle Phi(r, t) = int_0^t v_alpha[A omega](r, s) / r ds.
struct PseudoState {
  GridPtr grid;
  RadialProfile f;
  RadialProfile g;
  double lambda = 1.0;
  double beta = 0.5;
  int n = 1;
  int k_max = 1;
  double t = 0.0;
  std::vector<double> phase;         // Phi at the nodes
  std::vector<double> rate;          // v_alpha[A omega] / r at time t
  std::vector<double> frozen_rate;   // v_alpha[radial part at t = 0] / r
  std::vector<int> initial_sign;     // sign of the rate at t = 0
  std::size_t sign_changes = 0;      // nodes whose rate changed sign so far
};

/// Phi = 0 at t = 0, rates from omega0 (the full initial field).
PseudoState make_pseudo(const InitialData& data);

/// v_alpha[A omega] / r at the nodes of omega's grid.
std::vector<double> averaged_angular_rate(const PolarField& omega);

/// Trapezoid update Phi += dt (rate(t) + rate(t + dt)) / 2, with omega_next
/// the solution at t + dt. Throws std::invalid_argument on a grid mismatch or
/// dt < 0.
void advance_phase(PseudoState& state, const PolarField& omega_next, double dt);

/// Radial part plus oscillatory part at the current phase.
PolarField eval_pseudo(const PseudoState& state);
PolarField eval_pseudo_osc(const PseudoState& state);
PolarField eval_pseudo_rad(const PseudoState& state);

/// max_i |Phi_i - t frozen_rate_i|: how much the averaged flow differs from
/// the stationary radial part.
double frozen_phase_gap(const PseudoState& state);

struct PseudoError {
  double l2_error = 0.0;  // ||omega_osc - pseudo_osc||_{L^2}
  double pseudo_l2 = 0.0;
  double ratio = 0.0;     // l2_error / pseudo_l2 (0 when both vanish)
  double bound = 0.0;     // lambda^{2 - 2 beta} N^{-beta} log N
};

/// Throws std::invalid_argument when the layouts differ.
PseudoError pseudo_error(const PolarField& omega_osc, const PseudoState& state);

/// ||q||_{L^2} times the energy-weighted |xi|^s, with |xi|^2 = (k/r)^2 +
/// (d_r arg q_k)^2 per mode: the phase-gradient estimate of ||q||_{H^s dot}.
double hs_phase_estimate(const PolarField& q, double s);

/// Observers that advance the phase on every step and append
///   pseudo_err_l2, pseudo_err_rel, pseudo_bound, phase_frozen_gap,
///   and pseudo_hs_<s>, pseudo_hs_est_<s> for each s in hs_orders
/// to every monitor row. The state must outlive the run.
RunObservers pseudo_observers(PseudoState& state, std::vector<double> hs_orders = {},
                              SobolevMethod method = SobolevMethod::hankel);

/// Name used for the per-order columns ("0.5" -> "pseudo_hs_0.5").
std::string order_label(double s);

}  // namespace eulerinf
