#include "eulerinf/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <tuple>

#include "eulerinf/angular_fft.hpp"
#include "eulerinf/biot_savart.hpp"
#include "eulerinf/stats.hpp"

namespace eulerinf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool finite(const PolarField& f) {
  for (const cplx& c : f.coeffs()) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  }
  return true;
}

PolarField angular_derivative(const PolarField& q) {
  PolarField out = q;
  for (std::size_t j = 0; j < q.rows(); ++j) {
    const cplx ik(0.0, static_cast<double>(q.wavenumber(j)));
    for (cplx& c : out.row(j)) c *= ik;
  }
  return out;
}

PolarField axpy(const PolarField& y, double h, const PolarField& k) {
  PolarField out = y;
  auto o = out.coeffs();
  auto kk = k.coeffs();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] += h * kk[n];
  return out;
}

double l2(const PolarField& f) { return std::sqrt(kTwoPi * mode_energy(f)); }

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::completed: return "completed";
    case Termination::resolution: return "resolution";
    case Termination::nonfinite: return "nonfinite";
    case Termination::step_limit: return "step_limit";
  }
  return "unknown";
}

void EvolveConfig::validate() const {
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be nonnegative");
  if (!(cfl > 0.0 && cfl <= 1.0)) throw std::invalid_argument("cfl must lie in (0, 1]");
  if (!(filter_strength >= 0.0)) throw std::invalid_argument("filter_strength must be nonnegative");
  if (!(dt >= 0.0)) throw std::invalid_argument("dt must be nonnegative");
  if (monitor_stride == 0) throw std::invalid_argument("monitor_stride must be positive");
  if (!(monitor_dt >= 0.0)) throw std::invalid_argument("monitor_dt must be nonnegative");
  if (!(guard_cells >= 0.0)) throw std::invalid_argument("guard_cells must be nonnegative");
  if (!(support_threshold > 0.0)) throw std::invalid_argument("support_threshold must be positive");
  if (leakage_symmetry && *leakage_symmetry < 1) throw std::invalid_argument("leakage symmetry must be positive");
}

Evolver::Evolver(EvolveConfig config) : config_(std::move(config)) { config_.validate(); }

std::size_t Evolver::samples_for(const PolarField& omega) const {
  const std::size_t j = omega.rows() - 1;
  if (!config_.dealias) return default_samples(omega);
  return smooth_fft_size(std::max<std::size_t>(3 * j + 2, 4));
}

Evolver::Velocity Evolver::velocity(const PolarField& omega, double t) const {
  Velocity v;
  v.m = samples_for(omega);
  PolarField vr, va;
  if (hook_) {
    auto [a, b] = hook_(omega, t);
    if (!a.same_layout(omega) || !b.same_layout(omega)) {
      throw std::invalid_argument("imposed velocity must share the vorticity layout");
    }
    vr = std::move(a);
    va = std::move(b);
  } else {
    auto modes = solver_for(omega.grid_ptr())->solve(omega);
    vr = std::move(modes.vr);
    va = std::move(modes.valpha);
  }
  v.vr = to_physical(vr, v.m);
  v.va_over_r = to_physical(va, v.m);
  const auto& g = omega.grid();
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double inv = 1.0 / g.node(i);
    for (std::size_t m = 0; m < v.m; ++m) v.va_over_r[i * v.m + m] *= inv;
  }
  return v;
}

PolarField Evolver::transport_rhs(const PolarField& q, const Velocity& v) const {
  const auto dr = to_physical(radial_derivative(q), v.m);
  const auto da = to_physical(angular_derivative(q), v.m);
  std::vector<double> prod(dr.size());
  for (std::size_t n = 0; n < prod.size(); ++n) prod[n] = -(v.vr[n] * dr[n] + v.va_over_r[n] * da[n]);
  PolarField out(q.grid_ptr(), q.k_max(), q.symmetry());
  from_physical(out, prod, v.m);
  return out;
}

double Evolver::stable_dt(const Velocity& v, const PolarField& omega) const {
  const auto& g = omega.grid();
  const double kmax = std::max(1, omega.k_max());
  double rate = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double inv_dr = 1.0 / g.spacing_at(i);
    for (std::size_t m = 0; m < v.m; ++m) {
      const std::size_t n = i * v.m + m;
      rate = std::max(rate, std::abs(v.vr[n]) * inv_dr + kmax * std::abs(v.va_over_r[n]));
    }
  }
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  return config_.cfl / rate;
}

double Evolver::stable_dt(const PolarField& omega, double t) const { return stable_dt(velocity(omega, t), omega); }

void Evolver::filter(PolarField& f) const {
  if (config_.filter_strength == 0.0 || f.k_max() == 0) return;
  for (std::size_t j = 1; j < f.rows(); ++j) {
    const double x = static_cast<double>(f.wavenumber(j)) / f.k_max();
    const double s = std::exp(-config_.filter_strength * std::pow(x, 16));
    for (cplx& c : f.row(j)) c *= s;
  }
}

void Evolver::advance(EvolveState& state, double dt, const Velocity& v0) const {
  const bool parts = state.rad.n_r() > 0;
  const double t = state.t;
  auto rhs_all = [&](const PolarField& w, const PolarField* r, const PolarField* o, const Velocity& v,
                     PolarField& kw, PolarField& kr, PolarField& ko) {
    kw = transport_rhs(w, v);
    if (parts) {
      kr = transport_rhs(*r, v);
      ko = transport_rhs(*o, v);
    }
  };
  PolarField k1w, k1r, k1o, k2w, k2r, k2o, k3w, k3r, k3o, k4w, k4r, k4o;
  rhs_all(state.omega, &state.rad, &state.osc, v0, k1w, k1r, k1o);

  PolarField w2 = axpy(state.omega, 0.5 * dt, k1w);
  PolarField r2, o2;
  if (parts) {
    r2 = axpy(state.rad, 0.5 * dt, k1r);
    o2 = axpy(state.osc, 0.5 * dt, k1o);
  }
  rhs_all(w2, &r2, &o2, velocity(w2, t + 0.5 * dt), k2w, k2r, k2o);

  PolarField w3 = axpy(state.omega, 0.5 * dt, k2w);
  PolarField r3, o3;
  if (parts) {
    r3 = axpy(state.rad, 0.5 * dt, k2r);
    o3 = axpy(state.osc, 0.5 * dt, k2o);
  }
  rhs_all(w3, &r3, &o3, velocity(w3, t + 0.5 * dt), k3w, k3r, k3o);

  PolarField w4 = axpy(state.omega, dt, k3w);
  PolarField r4, o4;
  if (parts) {
    r4 = axpy(state.rad, dt, k3r);
    o4 = axpy(state.osc, dt, k3o);
  }
  rhs_all(w4, &r4, &o4, velocity(w4, t + dt), k4w, k4r, k4o);

  auto combine = [dt](PolarField& y, const PolarField& a, const PolarField& b, const PolarField& c,
                      const PolarField& d) {
    auto o = y.coeffs();
    auto ka = a.coeffs(), kb = b.coeffs(), kc = c.coeffs(), kd = d.coeffs();
    for (std::size_t n = 0; n < o.size(); ++n) o[n] += dt / 6.0 * (ka[n] + 2.0 * kb[n] + 2.0 * kc[n] + kd[n]);
  };
  combine(state.omega, k1w, k2w, k3w, k4w);
  filter(state.omega);
  if (parts) {
    combine(state.rad, k1r, k2r, k3r, k4r);
    combine(state.osc, k1o, k2o, k3o, k4o);
    filter(state.rad);
    filter(state.osc);
  }
  state.t = t + dt;
  ++state.steps;
}

void Evolver::advance(EvolveState& state, double dt) const { advance(state, dt, velocity(state.omega, state.t)); }

StepResult Evolver::step(const PolarField& omega, double dt, double t) const {
  if (!(dt > 0.0)) throw std::invalid_argument("step size must be positive");
  EvolveState s{t, 0, omega, {}, {}};
  auto v = velocity(omega, t);
  const double bound = stable_dt(v, omega);
  StepResult out;
  out.substeps = dt <= bound ? 1 : static_cast<std::size_t>(std::ceil(dt / bound));
  const double h = dt / static_cast<double>(out.substeps);
  for (std::size_t n = 0; n < out.substeps; ++n) {
    if (n > 0) v = velocity(s.omega, s.t);
    advance(s, h, v);
  }
  out.omega = std::move(s.omega);
  return out;
}

PhaseResolution phase_resolution(const PolarField& q, double threshold) {
  PhaseResolution out;
  out.cells_per_wavelength = std::numeric_limits<double>::infinity();
  const auto& g = q.grid();
  double peak = 0.0;
  for (std::size_t j = 1; j < q.rows(); ++j) {
    for (const cplx& c : q.row(j)) peak = std::max(peak, std::abs(c));
  }
  if (!(peak > 0.0)) return out;
  std::vector<cplx> d(g.size());
  std::vector<double> e0(g.size()), e1(g.size()), ec(g.size());
  double s0 = 0.0, s1 = 0.0, sc = 0.0;
  for (std::size_t j = 1; j < q.rows(); ++j) {
    auto row = q.row(j);
    radial_derivative(g, row, d);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a2 = std::norm(row[i]);
      e0[i] = a2;
      e1[i] = std::norm(d[i]);
      ec[i] = e1[i] * g.spacing_at(i) * g.spacing_at(i);
      if (std::sqrt(a2) <= threshold * peak) continue;
      // d_r arg q = Im(q' conj q) / |q|^2
      out.kappa_max = std::max(out.kappa_max, std::abs((d[i] * std::conj(row[i])).imag()) / a2);
    }
    s0 += g.integrate(e0);
    s1 += g.integrate(e1);
    sc += g.integrate(ec);
  }
  if (!(s0 > 0.0)) return out;
  out.kappa_rms = std::sqrt(s1 / s0);
  if (sc > 0.0) out.cells_per_wavelength = kTwoPi / std::sqrt(sc / s0);
  return out;
}

double gradient_sup(const PolarField& q) {
  const std::size_t m = default_samples(q, 4);
  const auto dr = to_physical(radial_derivative(q), m);
  const auto da = to_physical(angular_derivative(q), m);
  const auto& g = q.grid();
  double out = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double inv = 1.0 / g.node(i);
    for (std::size_t k = 0; k < m; ++k) {
      const std::size_t n = i * m + k;
      out = std::max(out, std::hypot(dr[n], inv * da[n]));
    }
  }
  return out;
}

MonitorRow Evolver::monitor(const EvolveState& state, const EvolveState& initial, double linf0) const {
  MonitorRow row;
  row.t = state.t;
  row.step = state.steps;
  row.l1 = lp_norm(state.omega, 1.0);
  row.l2 = l2(state.omega);
  row.linf = lp_norm(state.omega, std::numeric_limits<double>::infinity());
  const double thr = config_.support_threshold * std::max(linf0, std::numeric_limits<double>::min());

  if (config_.leakage_symmetry && state.omega.stride() == 1) {
    const int n = *config_.leakage_symmetry;
    const auto& g = state.omega.grid();
    double off = 0.0, total = 0.0;
    std::vector<double> e(g.size());
    for (std::size_t j = 0; j < state.omega.rows(); ++j) {
      auto r = state.omega.row(j);
      for (std::size_t i = 0; i < g.size(); ++i) e[i] = std::norm(r[i]);
      const double ej = (j == 0 ? 1.0 : 2.0) * g.integrate(e);
      total += ej;
      if (state.omega.wavenumber(j) % n != 0) off += ej;
    }
    row.leakage = total > 0.0 ? off / total : 0.0;
  }

  const bool parts = state.rad.n_r() > 0;
  const PolarField& osc = parts ? state.osc : state.omega;
  if (parts) {
    if (auto s = support_annulus(state.rad, thr)) std::tie(row.supp_rad_lo, row.supp_rad_hi) = *s;
    row.rad_drift = l2(state.rad - initial.rad);
    const double denom = row.l2 > 0.0 ? row.l2 : 1.0;
    row.decomposition_error = l2(state.rad + state.osc - state.omega) / denom;
  }
  if (auto s = support_annulus(osc, thr)) std::tie(row.supp_osc_lo, row.supp_osc_hi) = *s;
  row.osc_l2 = l2(osc);
  row.c1_osc = gradient_sup(osc);
  row.osc_wavenumber = phase_resolution(osc).kappa_rms;
  for (double s : config_.hs_orders) {
    SobolevSpec spec;
    spec.s = s;
    spec.method = config_.hs_method;
    row.hs.push_back(osc.is_zero() ? 0.0 : norm(osc, spec));
  }
  return row;
}

RunResult Evolver::run(const PolarField& omega0, std::optional<std::pair<PolarField, PolarField>> parts,
                       const RunObservers& observers) const {
  RunResult res;
  res.record.hs_orders = config_.hs_orders;
  EvolveState state{0.0, 0, omega0, {}, {}};
  if (config_.track_parts) {
    if (parts) {
      if (!parts->first.same_layout(omega0) || !parts->second.same_layout(omega0)) {
        throw std::invalid_argument("decomposition parts must share the vorticity layout");
      }
      state.rad = parts->first;
      state.osc = parts->second;
    } else {
      state.rad = angular_average(omega0);
      state.osc = omega0 - state.rad;
    }
  }
  const EvolveState initial = state;
  const double linf0 = lp_norm(omega0, std::numeric_limits<double>::infinity());

  auto emit = [&](const EvolveState& s, double dt) {
    MonitorRow row = monitor(s, initial, linf0);
    row.dt = dt;
    if (observers.on_monitor) observers.on_monitor(s, row);
    res.record.rows.push_back(std::move(row));
  };
  emit(state, 0.0);

  const double t_end = config_.t_end;
  const double eps = 1e-12 * std::max(1.0, t_end);
  double next_monitor = config_.monitor_dt > 0.0 ? config_.monitor_dt : t_end;
  std::size_t since_monitor = 0;
  double last_dt = 0.0;
  res.dt_min = std::numeric_limits<double>::infinity();

  while (state.t < t_end - eps) {
    if (state.steps >= config_.max_steps) {
      res.termination = Termination::step_limit;
      res.detail = "step limit reached at t = " + std::to_string(state.t);
      break;
    }
    const auto v = velocity(state.omega, state.t);
    const double bound = stable_dt(v, state.omega);
    double dt = bound;
    if (config_.dt > 0.0) {
      if (config_.dt > bound) ++res.cfl_reductions;
      dt = std::min(config_.dt, bound);
    }
    bool at_monitor = false;
    const double target = config_.monitor_dt > 0.0 ? std::min(next_monitor, t_end) : t_end;
    if (state.t + dt >= target - eps) {
      dt = target - state.t;
      at_monitor = true;
    } else if (config_.monitor_dt > 0.0 && state.t + 2.0 * dt > target) {
      // split the remainder evenly instead of leaving a sliver step
      dt = 0.5 * (target - state.t);
    }

    const PolarField before = observers.on_step ? state.omega : PolarField{};
    const double t0 = state.t;
    advance(state, dt, v);
    if (at_monitor && std::abs(state.t - target) < 1e-9 * std::max(1.0, target)) state.t = target;
    last_dt = dt;
    res.dt_min = std::min(res.dt_min, dt);
    res.dt_max = std::max(res.dt_max, dt);
    if (observers.on_step) observers.on_step(StepInfo{t0, state.t, before, state.omega});

    if (!finite(state.omega) || (state.rad.n_r() > 0 && (!finite(state.rad) || !finite(state.osc)))) {
      res.termination = Termination::nonfinite;
      res.detail = "non-finite coefficients at t = " + std::to_string(state.t);
      break;
    }

    ++since_monitor;
    const bool done = state.t >= t_end - eps;
    bool monitor_now = done;
    if (config_.monitor_dt > 0.0) {
      if (at_monitor) {
        monitor_now = true;
        next_monitor += config_.monitor_dt;
      }
    } else if (since_monitor >= config_.monitor_stride) {
      monitor_now = true;
    }

    bool guard = false;
    if (config_.guard_cells > 0.0) {
      const auto pr = phase_resolution(state.rad.n_r() > 0 ? state.osc : state.omega);
      if (pr.cells_per_wavelength < config_.guard_cells) {
        guard = true;
        res.termination = Termination::resolution;
        res.detail = "radial wavelength of the oscillatory part below " + std::to_string(config_.guard_cells) +
                     " cells at t = " + std::to_string(state.t);
      }
    }
    if (monitor_now || guard) {
      emit(state, last_dt);
      since_monitor = 0;
    }
    if (guard) break;
  }
  if (res.dt_min == std::numeric_limits<double>::infinity()) res.dt_min = 0.0;
  res.final = std::move(state);
  return res;
}

std::optional<C1Envelope> fit_c1_envelope(const TrajectoryRecord& rec, double lambda, double beta, int n) {
  const double scale = std::pow(lambda, 2.0 - beta) * std::pow(static_cast<double>(n), 1.0 - beta);
  const double rate = std::pow(lambda, 1.0 - beta);
  std::vector<double> x, y;
  for (const auto& r : rec.rows) {
    if (!(r.c1_osc > 0.0)) continue;
    x.push_back(rate * r.t);
    y.push_back(std::log(r.c1_osc / scale));
  }
  const auto fit = ols(x, y);
  if (!fit) return std::nullopt;
  C1Envelope e;
  e.c = std::max(0.0, fit->slope);
  double log_a = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < x.size(); ++i) log_a = std::max(log_a, y[i] - e.c * x[i]);
  e.a = std::exp(log_a);
  return e;
}

}  // namespace eulerinf
