#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eulerinf/polar_field.hpp"
#include "eulerinf/sobolev.hpp"

namespace eulerinf {

struct EvolveConfig {
  double t_end = 1.0;
  double cfl = 0.5;
  /// Pad the angular transform so quadratic products are exact before
  /// truncation (3/2 padding, equivalent to the 2/3 rule).
  bool dealias = true;
  /// exp(-a (j / j_max)^16) on the stored rows after each step; 0 = off.
  double filter_strength = 0.0;
  /// Requested step; reduced when the CFL bound is smaller. 0 = CFL only.
  double dt = 0.0;
  /// Diagnostics every `monitor_stride` steps, or every `monitor_dt` in time
  /// when positive (steps are shortened to land on monitor times).
  std::size_t monitor_stride = 10;
  double monitor_dt = 0.0;
  /// Homogeneous orders monitored on the oscillatory part.
  std::vector<double> hs_orders;
  SobolevMethod hs_method = SobolevMethod::hankel;
  /// Track radial and oscillatory parts as passive tracers.
  bool track_parts = true;
  /// Stop when the radial wavelength of the oscillatory part (energy-weighted,
  /// see phase_resolution) drops below guard_cells grid spacings.
  double guard_cells = 4.0;
  /// Support annuli use this fraction of the initial sup |omega|.
  double support_threshold = 1e-6;
  std::size_t max_steps = 10'000'000;
  /// Symmetry whose off-multiples are reported as leakage (full layouts only).
  std::optional<int> leakage_symmetry;

  void validate() const;
};

struct MonitorRow {
  double t = 0.0;
  std::size_t step = 0;
  double dt = 0.0;  // last step taken
  double l1 = 0.0, l2 = 0.0, linf = 0.0;
  double supp_osc_lo = 0.0, supp_osc_hi = 0.0;  // 0 when the part vanishes
  double supp_rad_lo = 0.0, supp_rad_hi = 0.0;
  double osc_l2 = 0.0;
  double c1_osc = 0.0;  // sup |grad omega_osc|
  std::vector<double> hs;  // per EvolveConfig::hs_orders
  double decomposition_error = 0.0;  // ||rad + osc - omega||_2 / ||omega||_2
  double rad_drift = 0.0;            // ||rad(t) - rad(0)||_2
  double leakage = 0.0;              // energy fraction off the symmetry
  double osc_wavenumber = 0.0;       // rms radial wavenumber of the osc part
  /// Named values appended by observers (pseudo-solution errors etc.).
  std::vector<std::pair<std::string, double>> extra;
};

struct TrajectoryRecord {
  std::vector<double> hs_orders;
  std::vector<MonitorRow> rows;
};

enum class Termination { completed, resolution, nonfinite, step_limit };
std::string to_string(Termination t);

struct EvolveState {
  double t = 0.0;
  std::size_t steps = 0;
  PolarField omega;
  PolarField rad;  // empty when parts are not tracked
  PolarField osc;
};

/// Replaces the Biot-Savart velocity: returns (v_r, v_alpha) modes in the
/// layout of omega. Used by transport tests.
using VelocityHook = std::function<std::pair<PolarField, PolarField>(const PolarField& omega, double t)>;

struct StepInfo {
  double t0;
  double t1;
  const PolarField& before;
  const PolarField& after;
};

struct RunObservers {
  std::function<void(const StepInfo&)> on_step;
  std::function<void(const EvolveState&, MonitorRow&)> on_monitor;
};

struct RunResult {
  EvolveState final;
  TrajectoryRecord record;
  Termination termination = Termination::completed;
  std::string detail;
  std::size_t cfl_reductions = 0;
  double dt_min = 0.0;
  double dt_max = 0.0;
};

struct StepResult {
  PolarField omega;
  std::size_t substeps = 1;  // > 1 when dt exceeded the CFL bound
};

class Evolver {
 public:
  explicit Evolver(EvolveConfig config = {});

  void set_velocity_hook(VelocityHook hook) { hook_ = std::move(hook); }
  const EvolveConfig& config() const { return config_; }

  /// Largest stable step for the current velocity.
  double stable_dt(const PolarField& omega, double t = 0.0) const;
  /// One RK4 step of size dt, split into equal substeps if dt is above the
  /// CFL bound.
  StepResult step(const PolarField& omega, double dt, double t = 0.0) const;
  /// RK4 step of the state; tracers see the velocity of state.omega.
  void advance(EvolveState& state, double dt) const;

  /// Evolve to config.t_end. `parts` seeds the tracers (defaults to the
  /// angular average and the remainder).
  RunResult run(const PolarField& omega0, std::optional<std::pair<PolarField, PolarField>> parts = std::nullopt,
                const RunObservers& observers = {}) const;

  /// Monitor values of a state (no observers).
  MonitorRow monitor(const EvolveState& state, const EvolveState& initial, double linf0) const;

  /// Angular samples per symmetry period used for the products.
  std::size_t samples_for(const PolarField& omega) const;

 private:
  struct Velocity {
    std::vector<double> vr, va_over_r;  // physical samples [i][m]
    std::size_t m = 0;
  };
  Velocity velocity(const PolarField& omega, double t) const;
  PolarField transport_rhs(const PolarField& q, const Velocity& v) const;
  double stable_dt(const Velocity& v, const PolarField& omega) const;
  void advance(EvolveState& state, double dt, const Velocity& v0) const;
  void filter(PolarField& f) const;

  EvolveConfig config_;
  VelocityHook hook_;
};

/// Radial oscillation scale of the rows k >= 1.
struct PhaseResolution {
  /// sqrt(sum_k int |q_k'|^2 r dr / sum_k int |q_k|^2 r dr): the phase
  /// gradient of a winding mode, plus the envelope contribution.
  double kappa_rms = 0.0;
  /// max |d_r arg q_k| where |q_k| > threshold * max_{k>=1} |q_k|. Spikes
  /// where a nearly real profile changes sign, so it is reported only.
  double kappa_max = 0.0;
  /// 2 pi over the energy-weighted phase advance per grid cell; infinite for
  /// radial fields.
  double cells_per_wavelength = 0.0;
};
PhaseResolution phase_resolution(const PolarField& q, double threshold = 1e-2);

/// sup |grad q| from 4x refined angular samples.
double gradient_sup(const PolarField& q);

/// Upper envelope c1(t) <= A lambda^{2-beta} N^{1-beta} exp(C lambda^{1-beta} t).
struct C1Envelope {
  double a = 0.0;
  double c = 0.0;
};
std::optional<C1Envelope> fit_c1_envelope(const TrajectoryRecord& rec, double lambda, double beta, int n);

}  // namespace eulerinf
