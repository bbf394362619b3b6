#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "eulerinf/construction.hpp"
#include "eulerinf/evolve.hpp"
#include "test_util.hpp"

using namespace eulerinf;

namespace {

constexpr double kPi = std::numbers::pi;

double l2(const PolarField& f) { return std::sqrt(2.0 * kPi * mode_energy(f)); }

// Strong vortex plus a cos(2a) perturbation: O(1) velocities, so the time
// error is well above rounding.
PolarField lively_field(const GridPtr& grid, int k_max) {
  PolarField w(grid, k_max);
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double r = grid->node(i);
    w.row(0)[i] = testutil::bump(r, 0.2, 1.6);
    w.row(2)[i] = 0.3 * testutil::bump(r, 0.5, 1.2);
  }
  return w;
}

const InitialData& desk() {
  static const InitialData d = assemble_initial(ConstructionParams{});
  return d;
}

}  // namespace

TEST_SUITE("evolve") {
  TEST_CASE("config validation") {
    EvolveConfig c;
    c.cfl = 0.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.cfl = 1.5;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.cfl = 1.0;
    c.filter_strength = -1.0;
    CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    c.filter_strength = 0.0;
    CHECK_NOTHROW(c.validate());
  }

  TEST_CASE("radial fields are steady") {
    auto grid = make_log_grid(0.02, 4.0, 300);
    auto w = testutil::radial_mode(grid, 6, 0, [](double r) { return testutil::bump(r, 0.3, 2.0); });
    Evolver ev;
    const auto out = ev.step(w, 0.05);
    double diff = 0.0;
    for (std::size_t n = 0; n < w.coeffs().size(); ++n) diff = std::max(diff, std::abs(out.omega.coeffs()[n] - w.coeffs()[n]));
    CHECK(diff <= 1e-12);
  }

  TEST_CASE("zero field stays zero") {
    auto grid = make_log_grid(0.02, 4.0, 100);
    PolarField w(grid, 4);
    EvolveConfig c;
    c.t_end = 0.5;
    c.dt = 0.1;
    const auto res = Evolver(c).run(w);
    CHECK(res.termination == Termination::completed);
    CHECK(res.final.omega.is_zero());
    CHECK(res.final.osc.is_zero());
    CHECK(res.record.rows.back().l2 == 0.0);
  }

  TEST_CASE("solid rotation returns after one period") {
    // imposed v_alpha = r rotates the plane rigidly with period 2 pi
    auto grid = make_uniform_grid(0.05, 3.0, 200);
    auto w = testutil::radial_mode(grid, 4, 1, [](double r) { return testutil::bump(r, 1.0, 2.0); });
    EvolveConfig c;
    c.t_end = 2.0 * kPi;
    c.dt = 2.0 * kPi / 400.0;
    c.monitor_dt = 0.5 * kPi;
    c.track_parts = false;
    Evolver ev(c);
    ev.set_velocity_hook([](const PolarField& omega, double) {
      PolarField vr(omega.grid_ptr(), omega.k_max(), omega.symmetry());
      PolarField va(omega.grid_ptr(), omega.k_max(), omega.symmetry());
      for (std::size_t i = 0; i < omega.n_r(); ++i) va.row(0)[i] = omega.grid().node(i);
      return std::pair{vr, va};
    });
    const auto res = ev.run(w);
    REQUIRE(res.termination == Termination::completed);
    CHECK(res.final.t == doctest::Approx(2.0 * kPi).epsilon(1e-14));
    CHECK(l2(res.final.omega - w) / l2(w) < 1e-6);
    // a quarter turn is the exact rotation by pi / 2
    CHECK(res.record.rows.size() == 5);
    for (std::size_t n = 1; n < res.record.rows.size(); ++n) {
      CHECK(res.record.rows[n].t > res.record.rows[n - 1].t);
    }
  }

  TEST_CASE("oversized steps are split and recorded") {
    auto grid = make_log_grid(0.05, 3.0, 200);
    const auto w = lively_field(grid, 8);
    Evolver ev;
    const double bound = ev.stable_dt(w);
    REQUIRE(std::isfinite(bound));
    const auto big = ev.step(w, 3.5 * bound);
    CHECK(big.substeps == 4);
    EvolveConfig c;
    c.t_end = 4.0 * bound;
    c.dt = 2.0 * bound;
    const auto res = Evolver(c).run(w);
    CHECK(res.cfl_reductions > 0);
    CHECK(res.dt_max <= bound * 1.05);
  }

  TEST_CASE("symmetry preserved on a full layout") {
    const auto& d = desk();
    const auto full = with_symmetry(d.omega, std::nullopt);
    EvolveConfig c;
    c.t_end = 0.5;
    c.monitor_dt = 0.25;
    c.leakage_symmetry = d.n;
    const auto res = Evolver(c).run(full);
    REQUIRE(res.termination == Termination::completed);
    for (const auto& row : res.record.rows) CHECK(row.leakage < 1e-10);
  }

  TEST_CASE("decomposition tracks the full field") {
    auto grid = make_log_grid(0.05, 3.0, 200);
    const auto w = lively_field(grid, 8);
    EvolveConfig c;
    c.t_end = 0.5;
    c.monitor_stride = 2;
    const auto res = Evolver(c).run(w);
    REQUIRE(res.termination == Termination::completed);
    REQUIRE(res.record.rows.size() > 2);
    for (const auto& row : res.record.rows) CHECK(row.decomposition_error < 1e-8);
    // the radial part is transported by a non-radial flow, so it drifts
    CHECK(res.record.rows.back().rad_drift > 0.0);
  }

  TEST_CASE("f = 0 keeps the radial part at zero") {
    ConstructionParams p;
    p.f.amplitude = 0.0;
    const auto d = assemble_initial(p);
    EvolveConfig c;
    c.t_end = 0.2;
    const auto res = Evolver(c).run(d.omega, std::pair{d.radial, d.oscillatory});
    CHECK(res.final.rad.is_zero());
  }

  TEST_CASE("conservation over a short lively run") {
    auto grid = make_log_grid(0.05, 3.0, 300);
    const auto w = lively_field(grid, 16);
    EvolveConfig c;
    c.t_end = 1.0;
    c.monitor_dt = 0.5;
    const auto res = Evolver(c).run(w);
    REQUIRE(res.termination == Termination::completed);
    const auto& a = res.record.rows.front();
    const auto& b = res.record.rows.back();
    CHECK(testutil::rel(b.l1, a.l1) < 1e-3);
    CHECK(testutil::rel(b.l2, a.l2) < 1e-3);
    CHECK(testutil::rel(b.linf, a.linf) < 1e-3);
  }

  TEST_CASE("time error falls at fourth order") {
    auto grid = make_log_grid(0.05, 3.0, 200);
    const auto w = lively_field(grid, 8);
    std::vector<PolarField> out;
    for (double dt : {0.04, 0.02, 0.01}) {
      EvolveConfig c;
      c.t_end = 0.4;
      c.dt = dt;
      c.track_parts = false;
      const auto res = Evolver(c).run(w);
      REQUIRE(res.cfl_reductions == 0);
      out.push_back(res.final.omega);
    }
    const double e1 = l2(out[0] - out[1]);
    const double e2 = l2(out[1] - out[2]);
    MESSAGE("dt-halving differences " << e1 << " " << e2);
    CHECK(std::log2(e1 / e2) >= 3.0);
  }

  TEST_CASE("phase resolution of a winding mode") {
    // q_1 = b(r) e^{-i K r}: |q'|^2 = b'^2 + K^2 b^2
    auto grid = make_uniform_grid(0.05, 3.0, 600);
    const double k = 20.0;
    PolarField q(grid, 2);
    for (std::size_t i = 0; i < grid->size(); ++i) {
      const double r = grid->node(i);
      q.row(1)[i] = testutil::bump(r, 1.0, 2.0) * std::exp(cplx(0.0, -k * r));
    }
    // Simpson on the bump, derivative by central differences of the closed form
    const int n = 20000;
    const double h = 1.0 / n;
    double num = 0.0, den = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double r = 1.0 + i * h;
      const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      const double db = (testutil::bump(r + 1e-6, 1.0, 2.0) - testutil::bump(r - 1e-6, 1.0, 2.0)) / 2e-6;
      num += w * db * db * r;
      den += w * std::pow(testutil::bump(r, 1.0, 2.0), 2) * r;
    }
    const double kappa = std::sqrt(k * k + num / den);
    // fourth-order differences: relative error about (K h)^4 / 30 = 3e-6
    const auto pr = phase_resolution(q);
    CHECK(pr.kappa_rms == doctest::Approx(kappa).epsilon(2e-5));
    CHECK(pr.cells_per_wavelength == doctest::Approx(2.0 * kPi / (kappa * grid->spacing_at(0))).epsilon(2e-5));
    // the faint bump flanks carry the differencing error of the steep envelope
    CHECK(pr.kappa_max == doctest::Approx(k).epsilon(1e-2));
    const auto flat = phase_resolution(testutil::radial_mode(grid, 2, 0, [](double) { return 1.0; }));
    CHECK(flat.kappa_rms == 0.0);
    CHECK(std::isinf(flat.cells_per_wavelength));
  }

  TEST_CASE("resolution guard stops a run") {
    auto grid = make_uniform_grid(0.05, 3.0, 120);
    const auto w = lively_field(grid, 8);
    EvolveConfig c;
    c.t_end = 5.0;
    c.guard_cells = 1e6;  // any winding at all trips it
    const auto res = Evolver(c).run(w);
    CHECK(res.termination == Termination::resolution);
    CHECK(res.final.t < 5.0);
    CHECK(res.record.rows.back().t == res.final.t);
  }

  TEST_CASE("gradient sup of a linear-in-x field") {
    // q = x = r cos a has |grad q| = 1
    auto grid = make_uniform_grid(0.1, 2.0, 200);
    auto q = testutil::radial_mode(grid, 2, 1, [](double r) { return 0.5 * r; });
    CHECK(gradient_sup(q) == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("C1 envelope fit") {
    TrajectoryRecord rec;
    const double lambda = 4.0, beta = 0.5;
    const int n = 18;
    const double scale = std::pow(lambda, 1.5) * std::pow(n, 0.5);
    for (int i = 0; i <= 4; ++i) {
      MonitorRow row;
      row.t = 0.25 * i;
      row.c1_osc = 0.3 * scale * std::exp(0.7 * 2.0 * row.t);
      rec.rows.push_back(row);
    }
    const auto e = fit_c1_envelope(rec, lambda, beta, n);
    REQUIRE(e);
    CHECK(e->c == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(e->a == doctest::Approx(0.3).epsilon(1e-12));
    rec.rows.resize(1);
    CHECK_FALSE(fit_c1_envelope(rec, lambda, beta, n));
  }
}
