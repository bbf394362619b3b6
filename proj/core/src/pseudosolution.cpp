#include "eulerinf/pseudosolution.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "eulerinf/biot_savart.hpp"
#include "eulerinf/sobolev.hpp"

namespace eulerinf {

namespace {

int sign(double x) { return (x > 0.0) - (x < 0.0); }

double l2(const PolarField& f) { return std::sqrt(2.0 * std::numbers::pi * mode_energy(f)); }

}  // namespace

std::vector<double> averaged_angular_rate(const PolarField& omega) {
  auto v = solver_for(omega.grid_ptr())->radial_velocity_profile(omega.row(0));
  const auto& g = omega.grid();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] /= g.node(i);
  return v;
}

PseudoState make_pseudo(const InitialData& data) {
  PseudoState s;
  s.grid = data.omega.grid_ptr();
  s.f = data.f.profile;
  s.g = data.g.profile;
  s.lambda = data.params.lambda;
  s.beta = data.params.beta;
  s.n = data.n;
  s.k_max = data.omega.k_max();
  s.phase.assign(s.grid->size(), 0.0);
  s.rate = averaged_angular_rate(data.omega);
  s.frozen_rate = averaged_angular_rate(data.radial);
  s.initial_sign.resize(s.rate.size());
  for (std::size_t i = 0; i < s.rate.size(); ++i) s.initial_sign[i] = sign(s.rate[i]);
  return s;
}

void advance_phase(PseudoState& state, const PolarField& omega_next, double dt) {
  if (omega_next.grid_ptr() != state.grid) throw std::invalid_argument("pseudo state and solution grids differ");
  if (!(dt >= 0.0)) throw std::invalid_argument("phase step must be nonnegative");
  auto next = averaged_angular_rate(omega_next);
  for (std::size_t i = 0; i < next.size(); ++i) {
    state.phase[i] += 0.5 * dt * (state.rate[i] + next[i]);
    const int sg = sign(next[i]);
    if (state.initial_sign[i] != 0 && sg != 0 && sg != state.initial_sign[i]) {
      // count each node once
      ++state.sign_changes;
      state.initial_sign[i] = 0;
    }
  }
  state.rate = std::move(next);
  state.t += dt;
}

PolarField eval_pseudo_rad(const PseudoState& s) {
  return radial_part(s.grid, s.f, s.lambda, s.beta, s.n, s.k_max);
}

PolarField eval_pseudo_osc(const PseudoState& s) {
  return oscillatory_part(s.grid, s.g, s.lambda, s.beta, s.n, s.k_max, s.phase);
}

PolarField eval_pseudo(const PseudoState& s) {
  return initial_field(s.grid, s.f, s.g, s.lambda, s.beta, s.n, s.k_max, s.phase);
}

double frozen_phase_gap(const PseudoState& s) {
  double gap = 0.0;
  for (std::size_t i = 0; i < s.phase.size(); ++i) gap = std::max(gap, std::abs(s.phase[i] - s.t * s.frozen_rate[i]));
  return gap;
}

PseudoError pseudo_error(const PolarField& omega_osc, const PseudoState& state) {
  const PolarField bar = eval_pseudo_osc(state);
  if (!omega_osc.same_layout(bar)) throw std::invalid_argument("oscillatory part and pseudo state layouts differ");
  PseudoError e;
  e.l2_error = l2(omega_osc - bar);
  e.pseudo_l2 = l2(bar);
  e.ratio = e.pseudo_l2 > 0.0 ? e.l2_error / e.pseudo_l2 : 0.0;
  const double n = state.n;
  e.bound = std::pow(state.lambda, 2.0 - 2.0 * state.beta) * std::pow(n, -state.beta) * std::log(n);
  return e;
}

double hs_phase_estimate(const PolarField& q, double s) {
  const auto& g = q.grid();
  std::vector<cplx> d(g.size());
  std::vector<double> mass(g.size()), weighted(g.size());
  double m = 0.0, w = 0.0;
  for (std::size_t j = 0; j < q.rows(); ++j) {
    auto row = q.row(j);
    radial_derivative(g, row, d);
    const double k = q.wavenumber(j);
    const double c = j == 0 ? 1.0 : 2.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double a2 = std::norm(row[i]);
      mass[i] = a2;
      if (a2 == 0.0) {
        weighted[i] = 0.0;
        continue;
      }
      const double kappa = (d[i] * std::conj(row[i])).imag() / a2;
      const double xi2 = k * k / (g.node(i) * g.node(i)) + kappa * kappa;
      weighted[i] = a2 * std::pow(xi2, s);
    }
    m += c * g.integrate(mass);
    w += c * g.integrate(weighted);
  }
  if (!(m > 0.0)) return 0.0;
  return std::sqrt(2.0 * std::numbers::pi * w);
}

std::string order_label(double s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

RunObservers pseudo_observers(PseudoState& state, std::vector<double> hs_orders, SobolevMethod method) {
  RunObservers obs;
  obs.on_step = [&state](const StepInfo& info) {
    if (std::abs(info.t0 - state.t) > 1e-12 * std::max(1.0, std::abs(info.t0))) {
      throw std::logic_error("pseudo state time does not match the solver");
    }
    advance_phase(state, info.after, info.t1 - info.t0);
    state.t = info.t1;
  };
  obs.on_monitor = [&state, hs_orders = std::move(hs_orders), method](const EvolveState& es, MonitorRow& row) {
    const bool parts = es.osc.n_r() > 0;
    PseudoError e;
    if (parts) {
      e = pseudo_error(es.osc, state);
    } else {
      // no tracers: compare the full fields
      const PolarField bar = eval_pseudo(state);
      e.l2_error = l2(es.omega - bar);
      e.pseudo_l2 = l2(bar);
      e.ratio = e.pseudo_l2 > 0.0 ? e.l2_error / e.pseudo_l2 : 0.0;
      e.bound = pseudo_error(bar, state).bound;
    }
    row.extra.emplace_back("pseudo_err_l2", e.l2_error);
    row.extra.emplace_back("pseudo_err_rel", e.ratio);
    row.extra.emplace_back("pseudo_bound", e.bound);
    row.extra.emplace_back("phase_frozen_gap", frozen_phase_gap(state));
    if (!hs_orders.empty()) {
      const PolarField bar = eval_pseudo_osc(state);
      for (double s : hs_orders) {
        SobolevSpec spec;
        spec.s = s;
        spec.method = method;
        row.extra.emplace_back("pseudo_hs_" + order_label(s), bar.is_zero() ? 0.0 : norm(bar, spec));
        row.extra.emplace_back("pseudo_hs_est_" + order_label(s), hs_phase_estimate(bar, s));
      }
    }
  };
  return obs;
}

}  // namespace eulerinf
