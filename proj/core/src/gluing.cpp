#include "eulerinf/gluing.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <exception>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "eulerinf/biot_savart.hpp"

namespace eulerinf {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double l2(const PolarField& f) { return std::sqrt(kTwoPi * mode_energy(f)); }

double outer_radius(const PolarField& f, double threshold) {
  if (auto s = support_annulus(f, threshold)) return s->second;
  return 0.0;
}

// Weighted samples of a field over the full circle for direct kernel sums.
struct KernelSamples {
  std::vector<double> x, y, w;

  explicit KernelSamples(const PolarField& src) {
    const PolarField full = src.stride() == 1 ? src : with_symmetry(src, std::nullopt);
    const std::size_t m = default_samples(full, 2);
    const auto v = to_physical(full, m);
    const auto& g = full.grid();
    const auto wr = g.weights();
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t q = 0; q < m; ++q) {
        const double val = v[i * m + q];
        if (val == 0.0) continue;
        const double a = kTwoPi * static_cast<double>(q) / static_cast<double>(m);
        x.push_back(g.node(i) * std::cos(a));
        y.push_back(g.node(i) * std::sin(a));
        w.push_back(wr[i] * kTwoPi / static_cast<double>(m) * val);
      }
    }
  }

  // (1 / 2 pi) int (x - y)^perp / |x - y|^2 omega(y) dy
  std::array<double, 2> velocity(double px, double py) const {
    double vx = 0.0, vy = 0.0;
    for (std::size_t n = 0; n < w.size(); ++n) {
      const double dx = px - x[n];
      const double dy = py - y[n];
      const double inv = w[n] / (dx * dx + dy * dy);
      vx -= dy * inv;
      vy += dx * inv;
    }
    return {vx / kTwoPi, vy / kTwoPi};
  }
};

PieceRun run_piece(const GluingPiece& piece, const InitialData& data, const EvolveConfig& physical) {
  const double a = piece.time_dilation;
  EvolveConfig local = physical;
  local.t_end = physical.t_end / a;
  local.monitor_dt = physical.monitor_dt / a;
  local.dt = physical.dt / a;
  const double linf0 = lp_norm(data.omega, INFINITY);
  const double thr = physical.support_threshold * linf0 * piece.amplitude;

  PieceRun out;
  out.piece = piece;
  RunObservers obs;
  obs.on_monitor = [&](const EvolveState& s, MonitorRow&) {
    PolarField scaled = piece.amplitude * s.omega;
    out.t.push_back(a * s.t);
    out.v_sup.push_back(velocity_sup(scaled));
    out.support_radius.push_back(outer_radius(scaled, thr));
    out.snapshots.push_back(std::move(scaled));
  };
  out.local = Evolver(local).run(data.omega, std::pair{data.radial, data.oscillatory}, obs);
  out.v_max = out.v_sup.empty() ? 0.0 : *std::max_element(out.v_sup.begin(), out.v_sup.end());
  const auto& g = data.omega.grid();
  for (std::size_t k = 0; k < out.t.size(); ++k) {
    const double r0 = out.support_radius.front();
    const double cell = g.spacing_at(g.locate(std::min(std::max(r0, g.r_min()), g.r_max())));
    if (out.support_radius[k] > r0 + out.v_max * out.t[k] + cell) out.support_within_margin = false;
  }
  return out;
}

}  // namespace

double velocity_sup(const PolarField& omega) {
  if (omega.is_zero()) return 0.0;
  const auto modes = solve_velocity(omega);
  const std::size_t m = default_samples(omega, 4);
  const auto vr = to_physical(modes.vr, m);
  const auto va = to_physical(modes.valpha, m);
  double out = 0.0;
  for (std::size_t n = 0; n < vr.size(); ++n) out = std::max(out, std::hypot(vr[n], va[n]));
  return out;
}

std::vector<PieceRun> run_pieces(const GluedData& glued, const EvolveConfig& physical, std::size_t workers) {
  if (glued.pieces.size() != glued.plan.pieces.size()) throw std::invalid_argument("plan and pieces differ in count");
  if (!(physical.monitor_dt > 0.0)) throw std::invalid_argument("piece runs need a positive monitor_dt");
  const std::size_t n = glued.pieces.size();
  std::vector<PieceRun> out(n);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto work = [&] {
    for (std::size_t k; (k = next++) < n;) {
      try {
        out[k] = run_piece(glued.plan.pieces[k], glued.pieces[k], physical);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, n);
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

double scaling_identity_error(const PolarField& omega0, double t, double a, const EvolveConfig& cfg) {
  if (!(a > 0.0)) throw std::invalid_argument("scaling factor must be positive");
  EvolveConfig c1 = cfg;
  c1.t_end = t;
  c1.track_parts = false;
  c1.hs_orders.clear();
  EvolveConfig c2 = c1;
  c2.t_end = a * t;
  c2.monitor_dt = a * cfg.monitor_dt;
  c2.dt = a * cfg.dt;
  const auto ref = Evolver(c1).run(omega0);
  const auto scaled = Evolver(c2).run((1.0 / a) * omega0);
  const double den = l2(ref.final.omega);
  const double num = l2(a * scaled.final.omega - ref.final.omega);
  return den > 0.0 ? num / den : num;
}

FarFieldCheck far_field_check(const PolarField& source, double distance, double angle) {
  if (!(distance > 0.0)) throw std::invalid_argument("probe distance must be positive");
  FarFieldCheck c;
  c.distance = distance;
  c.l1 = lp_norm(source, 1.0);
  c.bound = c.l1 / (kTwoPi * distance);
  const double rho = outer_radius(source, 1e-14 * std::max(lp_norm(source, INFINITY), 1e-300));
  c.probe_radius = rho + distance;
  const double px = c.probe_radius * std::cos(angle);
  const double py = c.probe_radius * std::sin(angle);
  const auto q = KernelSamples(source).velocity(px, py);
  c.quadrature = std::hypot(q[0], q[1]);
  const auto v = solve_velocity(source).cartesian(px, py);
  c.mode_solver = std::hypot(v[0], v[1]);
  return c;
}

std::vector<PairInteraction> interaction_bound(const GluingPlan& plan, const std::vector<PieceRun>& runs,
                                               std::size_t k) {
  std::vector<PairInteraction> out;
  if (runs.size() != plan.pieces.size()) throw std::invalid_argument("plan and runs differ in count");
  if (runs.size() < 2) return out;
  for (const auto& r : runs) {
    if (k >= r.snapshots.size()) throw std::out_of_range("monitor index beyond a piece run");
  }
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const PolarField& src = runs[i].snapshots[k];
    const auto modes = solve_velocity(src);
    const KernelSamples kernel(src);
    const double l1 = lp_norm(src, 1.0);
    for (std::size_t j = 0; j < runs.size(); ++j) {
      if (i == j) continue;
      PairInteraction p;
      p.source = runs[i].piece.j;
      p.target = runs[j].piece.j;
      const double dx = runs[j].piece.center - runs[i].piece.center;
      const double rho_j = runs[j].support_radius[k];
      p.distance = std::abs(dx) - runs[i].support_radius[k] - rho_j;
      p.self_velocity = runs[j].v_sup[k];
      if (!(p.distance > 0.0)) {
        p.overlap = true;
        out.push_back(p);
        continue;
      }
      p.far_field_bound = l1 / (kTwoPi * p.distance);
      // probes: centre and a ring on the target support boundary
      double best = -1.0, bx = dx, by = 0.0;
      for (int q = -1; q < 32; ++q) {
        const double a = kTwoPi * q / 32.0;
        const double px = q < 0 ? dx : dx + rho_j * std::cos(a);
        const double py = q < 0 ? 0.0 : rho_j * std::sin(a);
        const auto v = modes.cartesian(px, py);
        const double s = std::hypot(v[0], v[1]);
        if (s > best) {
          best = s;
          bx = px;
          by = py;
        }
      }
      p.cross_velocity = best;
      const auto vq = kernel.velocity(bx, by);
      p.cross_quadrature = std::hypot(vq[0], vq[1]);
      if (p.self_velocity > 0.0) {
        p.ratio = p.cross_velocity / p.self_velocity;
        p.bound_ratio = p.far_field_bound / p.self_velocity;
      }
      out.push_back(p);
    }
  }
  return out;
}

GluedBound glued_norm_lower_bound(const GluingPlan& plan, const std::vector<PieceRun>& runs, std::size_t k,
                                  const SobolevSpec& spec) {
  if (runs.size() != plan.pieces.size()) throw std::invalid_argument("plan and runs differ in count");
  if (spec.s < 0.0) throw std::invalid_argument("glued lower bound needs s >= 0");
  GluedBound b;
  b.min_distance = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < runs.size(); ++i) {
    for (std::size_t j = i + 1; j < runs.size(); ++j) {
      const double d = std::abs(runs[j].piece.center - runs[i].piece.center) - runs[i].support_radius.at(k) -
                       runs[j].support_radius.at(k);
      b.min_distance = std::min(b.min_distance, d);
      if (!(d > 0.0)) b.disjoint = false;
    }
  }
  if (!b.disjoint) return b;

  std::vector<double> l1;
  double squares = 0.0;
  for (const auto& r : runs) {
    const PolarField& f = r.snapshots.at(k);
    const double v = f.is_zero() ? 0.0 : norm(f, spec);
    b.piece_norms.push_back(v);
    b.sum_of_norms += v;
    b.max_single = std::max(b.max_single, v);
    squares += v * v;
    l1.push_back(lp_norm(f, 1.0));
  }
  // the cross terms vanish at s = 0 (orthogonality) and s = 1 (local operator)
  if (spec.s > 0.0 && spec.s < 1.0) {
    const double cs = slobodeckij_constant(spec.s);
    for (std::size_t i = 0; i < runs.size(); ++i) {
      for (std::size_t j = i + 1; j < runs.size(); ++j) {
        const double d = std::abs(runs[j].piece.center - runs[i].piece.center) - runs[i].support_radius[k] -
                         runs[j].support_radius[k];
        b.cross_bound += 4.0 * cs * l1[i] * l1[j] / std::pow(d, 2.0 + 2.0 * spec.s);
      }
    }
  }
  b.orthogonal_bound = std::sqrt(std::max(0.0, squares - b.cross_bound));
  return b;
}

}  // namespace eulerinf
