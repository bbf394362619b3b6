#include "eulerinf/construction.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numbers>
#include <sstream>

#include "eulerinf/biot_savart.hpp"
#include "eulerinf/sobolev.hpp"

namespace eulerinf {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

double moment_scale(const RadialProfile& p) {
  double s = 0.0;
  for (const auto& b : p.pieces()) s += std::abs(RadialProfile({b}).radial_moment());
  return s;
}

void check_bump(double lo, double hi, const char* what) {
  if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument(std::string(what) + ": need 0 < lo < hi");
}

}  // namespace

BuiltProfile build_g(const GSpec& spec) {
  check_bump(spec.lo, spec.hi, "g support");
  const double unit = RadialProfile({Bump{spec.lo, spec.hi, 1.0}}).h1_norm();
  const double amp = spec.amplitude.value_or(spec.h1_target / unit);
  BuiltProfile out;
  if (amp != 0.0) out.profile = RadialProfile({Bump{spec.lo, spec.hi, amp}});
  auto& r = out.report;
  r.h1_norm = std::abs(amp) * unit;
  r.radial_moment = out.profile.radial_moment();
  r.moment_scale = std::abs(r.radial_moment);
  r.support = {spec.lo, spec.hi};
  if (r.h1_norm > spec.h1_limit * (1.0 + 1e-12)) {
    r.failures.push_back("H1 norm " + fmt(r.h1_norm) + " exceeds " + fmt(spec.h1_limit));
  }
  if (spec.lo != 0.5 || spec.hi != 4.0) r.notes.push_back("support differs from (1/2, 4)");
  r.valid = r.failures.empty();
  return out;
}

MonotonicityWindow monotonicity_window(const RadialProfile& f, double lo, double hi) {
  MonotonicityWindow w;
  w.lo = lo;
  w.hi = hi;
  if (f.empty()) return w;
  const auto [a, b] = f.hull();
  auto grid = make_log_grid_per_decade(0.9 * std::min(a, lo), 1.1 * std::max(b, hi), 400.0);
  std::vector<cplx> w0(grid->size());
  for (std::size_t i = 0; i < w0.size(); ++i) w0[i] = f(grid->node(i));
  const auto va = solver_for(grid)->radial_velocity_profile(w0);
  std::vector<double> q(va.size()), dq(va.size());
  for (std::size_t i = 0; i < q.size(); ++i) q[i] = va[i] / grid->node(i);
  radial_derivative(*grid, q, dq);
  bool first = true;
  w.sign_definite = true;
  for (std::size_t i = 0; i < dq.size(); ++i) {
    const double r = grid->node(i);
    if (r < lo || r > hi) continue;
    if (first) {
      w.sign = dq[i] > 0.0 ? 1 : (dq[i] < 0.0 ? -1 : 0);
      w.min_value = w.max_value = w.sign * dq[i];
      first = false;
    }
    const double v = w.sign * dq[i];
    if (!(v > 0.0)) w.sign_definite = false;
    w.min_value = std::min(w.min_value, v);
    w.max_value = std::max(w.max_value, v);
  }
  if (first || w.sign == 0) w.sign_definite = false;
  if (w.sign_definite) w.m = std::max(w.max_value, 1.0 / w.min_value);
  return w;
}

BuiltProfile build_f(const FSpec& spec) {
  check_bump(spec.tilde_lo, spec.tilde_hi, "f support");
  if (!(spec.lambda0 >= 1.0)) throw std::invalid_argument("f: lambda0 must be >= 1");
  const double l0 = spec.lambda0;
  const RadialProfile unit({Bump{spec.tilde_lo / l0, spec.tilde_hi / l0, -l0 * l0},
                            Bump{spec.tilde_lo * l0, spec.tilde_hi * l0, 1.0 / (l0 * l0)}});
  const double c = spec.amplitude.value_or(spec.h1_target / unit.h1_norm());
  BuiltProfile out;
  if (c != 0.0) out.profile = unit * c;
  auto& r = out.report;
  r.h1_norm = std::abs(c) * unit.h1_norm();
  r.radial_moment = out.profile.radial_moment();
  r.moment_scale = moment_scale(out.profile);
  r.support = unit.hull();
  if (r.h1_norm > spec.h1_limit * (1.0 + 1e-12)) {
    r.failures.push_back("H1 norm " + fmt(r.h1_norm) + " exceeds " + fmt(spec.h1_limit));
  }
  if (std::abs(r.radial_moment) > 1e-10 * r.moment_scale) {
    r.failures.push_back("radial moment " + fmt(r.radial_moment) + " not zero");
  }
  r.window = monotonicity_window(out.profile);
  if (!r.window->sign_definite) {
    r.failures.push_back(c == 0.0 ? "monotonicity window degenerate (zero profile)"
                                  : "d_r(v_alpha/r) changes sign on (1/2, 4); increase lambda0");
  } else if (spec.m_limit && r.window->m > *spec.m_limit) {
    r.failures.push_back("measured M " + fmt(r.window->m) + " exceeds " + fmt(*spec.m_limit));
  }
  // support conditions of the asymptotic construction, not reachable on a desk grid
  const double in_lo = spec.tilde_lo / l0, in_hi = spec.tilde_hi / l0;
  const double out_lo = spec.tilde_lo * l0, out_hi = spec.tilde_hi * l0;
  if (in_lo > 1e-4) r.notes.push_back("inner ring starts at " + fmt(in_lo) + " > 1e-4");
  if (in_hi >= 1.0 / 16.0) r.notes.push_back("inner ring ends at " + fmt(in_hi) + " >= 1/16");
  if (out_lo <= 16.0) r.notes.push_back("outer ring starts at " + fmt(out_lo) + " <= 16");
  if (out_hi < 1e3) r.notes.push_back("outer ring ends at " + fmt(out_hi) + " < 1000");
  r.valid = r.failures.empty();
  return out;
}

double beta_critical(double beta) { return (2.0 - beta) * beta / (2.0 - beta * beta); }

double beta_delta(double beta, double delta) {
  return (2.0 + delta - beta) * beta / (2.0 + delta - beta * beta);
}

ScalingLaw scaling_law(double beta, double delta, double lambda) {
  if (!(beta > 0.0 && beta < 1.0)) throw std::invalid_argument("beta must lie in (0, 1)");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");
  if (!(lambda >= 1.0)) throw std::invalid_argument("lambda must be >= 1");
  ScalingLaw s;
  s.n_exact = std::pow(lambda, (2.0 - 2.0 * beta + delta) / beta);
  // k_max is a multiple of N and must stay an int as well
  if (!(s.n_exact < static_cast<double>(INT_MAX / 16))) throw std::overflow_error("N overflows for this lambda");
  s.n = std::max(1, static_cast<int>(std::lround(s.n_exact)));
  s.residual = s.n - s.n_exact;
  s.beta_critical = beta_critical(beta);
  s.beta_delta = beta_delta(beta, delta);
  return s;
}

GridPtr construction_grid(const ConstructionParams& p, const RadialProfile& f, const RadialProfile& g) {
  const GridSpec& gs = p.grid;
  if (gs.nodes_per_decade < 16.0) {
    throw ResolutionError("grid needs at least 16 nodes per decade", 0);
  }
  std::vector<std::pair<double, double>> comps;
  for (const auto& c : f.components()) comps.emplace_back(c.first / p.lambda, c.second / p.lambda);
  if (!g.empty()) {
    for (const auto& c : g.components()) comps.emplace_back(c.first / p.lambda, c.second / p.lambda);
  } else {
    comps.emplace_back(p.g.lo / p.lambda, p.g.hi / p.lambda);
  }
  double lo = INFINITY, hi = 0.0, thinnest = INFINITY;
  for (const auto& [a, b] : comps) {
    lo = std::min(lo, a);
    hi = std::max(hi, b);
    thinnest = std::min(thinnest, std::log10(b / a));
  }
  lo /= gs.margin;
  hi *= gs.margin;
  const double decades = std::log10(hi / lo);
  const double need_density = static_cast<double>(gs.min_support_nodes) / thinnest;
  if (gs.nodes_per_decade < need_density) {
    const auto need = static_cast<std::size_t>(std::ceil(decades * need_density)) + 1;
    throw ResolutionError("grid density " + fmt(gs.nodes_per_decade) + " per decade leaves fewer than " +
                              std::to_string(gs.min_support_nodes) + " nodes in a support component; need " +
                              std::to_string(need) + " nodes",
                          need);
  }
  return make_log_grid_per_decade(lo, hi, gs.nodes_per_decade);
}

PolarField radial_part(const GridPtr& grid, const RadialProfile& f, double lambda, double beta, int n,
                       int k_max) {
  PolarField out(grid, k_max, n);
  const double amp = std::pow(lambda, 1.0 - beta);
  auto row = out.row(0);
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = amp * f(lambda * grid->node(i));
  return out;
}

PolarField oscillatory_part(const GridPtr& grid, const RadialProfile& g, double lambda, double beta, int n,
                            int k_max, std::span<const double> phase) {
  PolarField out(grid, k_max, n);
  if (!phase.empty() && phase.size() != grid->size()) throw std::invalid_argument("phase size mismatch");
  const double amp = 0.5 * std::pow(lambda, 1.0 - beta) * std::pow(static_cast<double>(n), -beta);
  auto row = out.row(*out.row_of(n));
  for (std::size_t i = 0; i < row.size(); ++i) {
    const double v = amp * g(lambda * grid->node(i));
    row[i] = (phase.empty() || phase[i] == 0.0) ? cplx(v) : v * std::polar(1.0, -n * phase[i]);
  }
  return out;
}

PolarField initial_field(const GridPtr& grid, const RadialProfile& f, const RadialProfile& g, double lambda,
                         double beta, int n, int k_max, std::span<const double> phase) {
  return radial_part(grid, f, lambda, beta, n, k_max) + oscillatory_part(grid, g, lambda, beta, n, k_max, phase);
}

InitialData assemble_initial(const ConstructionParams& params) {
  InitialData d;
  d.params = params;
  d.law = scaling_law(params.beta, params.delta, params.lambda);
  d.n = params.n_override.value_or(d.law.n);
  if (d.n < 1) throw std::invalid_argument("N must be positive");
  d.law.residual = d.n - d.law.n_exact;
  if (params.grid.k_factor < 1) throw std::invalid_argument("k_factor must be >= 1");
  d.f = build_f(params.f);
  d.g = build_g(params.g);
  const GridPtr grid = construction_grid(params, d.f.profile, d.g.profile);
  const int k_max = params.grid.k_factor * d.n;
  d.radial = radial_part(grid, d.f.profile, params.lambda, params.beta, d.n, k_max);
  d.oscillatory = oscillatory_part(grid, d.g.profile, params.lambda, params.beta, d.n, k_max);
  d.omega = d.radial + d.oscillatory;

  SobolevSpec hs;
  hs.s = params.beta;
  hs.homogeneous = false;
  d.h_beta_norm = norm(d.omega, hs);
  std::vector<double> w0(grid->size());
  for (std::size_t i = 0; i < w0.size(); ++i) w0[i] = d.omega.row(0)[i].real();
  d.circulation = 2.0 * kPi * grid->integrate(w0);
  d.l1 = lp_norm(d.omega, 1.0);

  for (const auto& m : d.f.report.failures) d.failures.push_back("f: " + m);
  for (const auto& m : d.g.report.failures) d.failures.push_back("g: " + m);
  if (d.h_beta_norm > 1.0) d.failures.push_back("H^beta norm " + fmt(d.h_beta_norm) + " exceeds 1");
  if (std::abs(d.circulation) > 1e-8 * d.l1) {
    d.failures.push_back("total circulation " + fmt(d.circulation) + " not zero");
  }
  if (params.beta_target && !(d.law.beta_delta < *params.beta_target)) {
    d.failures.push_back("beta_delta " + fmt(d.law.beta_delta) + " not below target " + fmt(*params.beta_target));
  }
  d.valid = d.failures.empty();
  return d;
}

double GluingPlan::min_gap() const {
  double gap = INFINITY;
  for (std::size_t j = 0; j + 1 < pieces.size(); ++j)
    gap = std::min(gap, pieces[j + 1].center - pieces[j].center - 2.0 * support_radius);
  return gap;
}

GluingPlan plan_gluing(int pieces, double v_max, double support_radius) {
  if (pieces < 1) throw std::invalid_argument("gluing needs at least one piece");
  if (!(v_max >= 0.0)) throw std::invalid_argument("v_max must be >= 0");
  if (!(support_radius > 0.0)) throw std::invalid_argument("support radius must be positive");
  GluingPlan plan;
  plan.v_max = v_max;
  plan.support_radius = support_radius;
  double center = 0.0;
  for (int j = 1; j <= pieces; ++j) {
    const double d = std::pow(4.0, j) * (v_max + 1.0) + 2.0 * support_radius;
    if (!(d < 1e15)) throw std::overflow_error("D_j out of range for J = " + std::to_string(pieces));
    GluingPiece p;
    p.j = j;
    p.half_sep = d;
    if (j > 1) center += plan.pieces.back().half_sep + d;
    p.center = center;
    p.amplitude = std::ldexp(1.0, -j);
    p.time_dilation = std::ldexp(1.0, j);
    plan.pieces.push_back(p);
  }
  return plan;
}

std::vector<std::string> check_plan(const GluingPlan& plan) {
  std::vector<std::string> bad;
  if (plan.pieces.empty()) return {"empty plan"};
  if (plan.pieces.front().center != 0.0) bad.push_back("R_1 != 0");
  for (std::size_t i = 0; i < plan.pieces.size(); ++i) {
    const auto& p = plan.pieces[i];
    const double floor = std::pow(4.0, p.j) * (plan.v_max + 1.0) + 2.0;
    if (p.half_sep < floor) bad.push_back("D_" + std::to_string(p.j) + " below floor " + fmt(floor));
    if (i + 1 < plan.pieces.size()) {
      const auto& q = plan.pieces[i + 1];
      const double want = p.center + p.half_sep + q.half_sep;
      if (std::abs(q.center - want) > 1e-12 * want) bad.push_back("R_" + std::to_string(q.j) + " breaks recurrence");
      const double gap = q.center - p.center - 2.0 * plan.support_radius;
      if (!(gap > 0.0) || gap < q.half_sep - 2.0 * plan.support_radius) {
        bad.push_back("pieces " + std::to_string(p.j) + " and " + std::to_string(q.j) + " too close");
      }
    }
  }
  return bad;
}

GluedData assemble_gluing(std::span<const ConstructionParams> piece_params, double v_max) {
  if (piece_params.empty()) throw std::invalid_argument("gluing needs at least one piece");
  GluedData out;
  double radius = 0.0;
  for (const auto& p : piece_params) {
    out.pieces.push_back(assemble_initial(p));
    const auto& d = out.pieces.back();
    double hi = d.g.profile.empty() ? 0.0 : d.g.profile.hull().second / p.lambda;
    if (!d.f.profile.empty()) hi = std::max(hi, d.f.profile.hull().second / p.lambda);
    radius = std::max(radius, hi);
  }
  out.plan = plan_gluing(static_cast<int>(piece_params.size()), v_max, std::max(radius, 1e-12));
  return out;
}

}  // namespace eulerinf
