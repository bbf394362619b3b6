#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "eulerinf/biot_savart.hpp"
#include "eulerinf/construction.hpp"
#include "test_util.hpp"

using namespace eulerinf;

namespace {

constexpr double kPi = std::numbers::pi;

// int_a^b bump(s) s ds for the unit bump, composite Simpson
double bump_moment(double a, double b) {
  const int n = 20000;
  const double h = (b - a) / n;
  double acc = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double s = a + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    acc += w * testutil::bump(s, a, b) * s;
  }
  return acc * h / 3.0;
}

}  // namespace

TEST_SUITE("construction") {
  TEST_CASE("scaling law arithmetic") {
    CHECK(beta_critical(0.5) == doctest::Approx(3.0 / 7.0).epsilon(1e-14));
    const auto s = scaling_law(0.5, 0.05, 10.0);
    CHECK(s.n == 126);
    CHECK(s.n_exact == doctest::Approx(std::pow(10.0, 2.1)).epsilon(1e-14));
    CHECK(std::abs(s.residual) < 0.5);
    CHECK(s.beta_delta == doctest::Approx(0.775 / 1.8).epsilon(1e-14));
    CHECK(s.beta_delta > s.beta_critical);
    CHECK(scaling_law(0.5, 0.05, 4.0).n == 18);
    CHECK(scaling_law(0.5, 0.05, 1.0).n == 1);
    CHECK_THROWS_AS(scaling_law(1.0, 0.05, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(scaling_law(0.5, 0.0, 4.0), std::invalid_argument);
    CHECK_THROWS_AS(scaling_law(0.5, 0.05, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(scaling_law(0.1, 0.05, 1e10), std::overflow_error);
  }

  TEST_CASE("g builder") {
    const auto g = build_g();
    CHECK(g.report.valid);
    CHECK(g.report.h1_norm == doctest::Approx(0.049).epsilon(1e-12));
    CHECK(g.profile.hull().first == 0.5);
    CHECK(g.profile.hull().second == 4.0);
    GSpec loud;
    loud.amplitude = 10.0;
    CHECK_FALSE(build_g(loud).report.valid);
    GSpec narrow;
    narrow.lo = 1.0;
    narrow.hi = 2.0;
    const auto n = build_g(narrow);
    CHECK(n.report.valid);
    CHECK(n.report.h1_norm <= 0.05);
    CHECK_FALSE(n.report.notes.empty());
  }

  TEST_CASE("f builder: zero mean and the monotonicity window in closed form") {
    const FSpec spec;
    const auto f = build_f(spec);
    REQUIRE(f.report.valid);
    CHECK(f.report.h1_norm == doctest::Approx(0.049).epsilon(1e-12));
    CHECK(std::abs(f.report.radial_moment) <= 1e-10 * f.report.moment_scale);
    // between the rings int_0^r f s ds = -c F, so d_r(v_alpha / r) = 2 c F / r^3
    const double c = f.profile.pieces()[1].amplitude * spec.lambda0 * spec.lambda0;
    const double F = bump_moment(spec.tilde_lo, spec.tilde_hi);
    const auto& w = *f.report.window;
    CHECK(w.sign == 1);
    CHECK(w.sign_definite);
    CHECK(w.max_value == doctest::Approx(2.0 * c * F / 0.125).epsilon(1e-3));
    CHECK(w.min_value == doctest::Approx(2.0 * c * F / 64.0).epsilon(1e-3));
    CHECK(w.m == doctest::Approx(std::max(w.max_value, 1.0 / w.min_value)));
    CHECK_FALSE(f.report.notes.empty());
  }

  TEST_CASE("f builder: degenerate, linear and too-compressed cases") {
    FSpec zero;
    zero.amplitude = 0.0;
    const auto z = build_f(zero);
    CHECK(z.profile.empty());
    CHECK(z.report.radial_moment == 0.0);
    CHECK_FALSE(z.report.valid);

    FSpec one, two;
    one.amplitude = 1e-6;
    two.amplitude = 2e-6;
    const auto a = build_f(one), b = build_f(two);
    CHECK(b.report.h1_norm == doctest::Approx(2.0 * a.report.h1_norm).epsilon(1e-12));
    CHECK(b.report.window->min_value == doctest::Approx(2.0 * a.report.window->min_value).epsilon(1e-10));
    auto grid = make_log_grid(0.01, 80.0, 600);
    std::vector<cplx> wa(grid->size()), wb(grid->size());
    for (std::size_t i = 0; i < wa.size(); ++i) {
      wa[i] = a.profile(grid->node(i));
      wb[i] = b.profile(grid->node(i));
    }
    const auto va = solver_for(grid)->radial_velocity_profile(wa);
    const auto vb = solver_for(grid)->radial_velocity_profile(wb);
    for (std::size_t i = 0; i < va.size(); i += 37) CHECK(vb[i] == doctest::Approx(2.0 * va[i]).epsilon(1e-12));

    FSpec tight;
    tight.lambda0 = 1.5;
    const auto t = build_f(tight);
    CHECK_FALSE(t.report.window->sign_definite);
    CHECK_FALSE(t.report.valid);
  }

  TEST_CASE("desk initial data") {
    const ConstructionParams p;
    const auto d = assemble_initial(p);
    CHECK(d.valid);
    CHECK(d.n == 18);
    CHECK(d.h_beta_norm <= 1.0);
    CHECK(d.h_beta_norm > 0.0);
    CHECK(std::abs(d.circulation) <= 1e-8 * d.l1);
    CHECK(d.omega.symmetry() == 18);
    CHECK(d.omega.k_max() == 54);
    const double amp_f = std::pow(4.0, 0.5), amp_g = 0.5 * std::pow(4.0, 0.5) / std::sqrt(18.0);
    const auto& g = d.omega.grid();
    for (std::size_t i = 0; i < g.size(); i += 29) {
      const double r = g.node(i);
      CHECK(d.omega.mode(0, i).real() == doctest::Approx(amp_f * d.f.profile(4.0 * r)).epsilon(1e-14).scale(1e-300));
      CHECK(d.omega.mode(18, i).real() == doctest::Approx(amp_g * d.g.profile(4.0 * r)).epsilon(1e-14).scale(1e-300));
      CHECK(d.omega.mode(36, i) == cplx(0.0));
    }
    // supports resolved: at least 32 nodes in each scaled component
    for (const auto& [a, b] : d.f.profile.components()) {
      std::size_t inside = 0;
      for (double r : g.nodes()) inside += (r > a / 4.0 && r < b / 4.0);
      CHECK(inside >= 32);
    }
  }

  TEST_CASE("special initial data") {
    ConstructionParams p;
    p.g.amplitude = 0.0;
    const auto radial = assemble_initial(p);
    CHECK(radial.oscillatory.is_zero());
    CHECK(radial.valid);

    ConstructionParams h;
    h.lambda = 1.0;
    h.n_override = 1;
    h.f.amplitude = 0.0;
    const auto one = assemble_initial(h);
    CHECK(one.n == 1);
    CHECK(one.radial.is_zero());
    const auto& gr = one.omega.grid();
    for (std::size_t i = gr.size() / 5; i < gr.size(); i += gr.size() / 5)
      for (double a : {0.0, 1.0, 2.5}) {
        const double r = gr.node(i);
        CHECK(synthesize(one.omega, r, a) == doctest::Approx(one.g.profile(r) * std::cos(a)).epsilon(1e-12).scale(1e-14));
      }
    // f amplitude zero makes the window degenerate, which the report flags
    CHECK_FALSE(one.valid);

    ConstructionParams loud;
    loud.g.amplitude = 100.0;
    const auto bad = assemble_initial(loud);
    CHECK_FALSE(bad.valid);
    CHECK(bad.h_beta_norm > 1.0);
  }

  TEST_CASE("under-resolved grids are rejected with a node count") {
    ConstructionParams p;
    p.grid.nodes_per_decade = 20.0;
    try {
      (void)assemble_initial(p);
      FAIL("expected a resolution error");
    } catch (const ResolutionError& e) {
      CHECK(e.required_nodes() > 0);
    }
    p.grid.nodes_per_decade = 10.0;
    CHECK_THROWS_AS((void)assemble_initial(p), ResolutionError);
  }

  TEST_CASE("gluing plan") {
    const auto one = plan_gluing(1, 1.0);
    CHECK(one.size() == 1);
    CHECK(one.pieces[0].center == 0.0);
    CHECK(check_plan(one).empty());

    const auto p = plan_gluing(3, 1.0);
    REQUIRE(p.size() == 3);
    CHECK(p.pieces[0].half_sep == 10.0);
    CHECK(p.pieces[1].half_sep == 34.0);
    CHECK(p.pieces[2].half_sep == 130.0);
    CHECK(p.pieces[1].center == 44.0);
    CHECK(p.pieces[2].center == 44.0 + 34.0 + 130.0);
    CHECK(p.pieces[2].amplitude == 0.125);
    CHECK(p.pieces[2].time_dilation == 8.0);
    CHECK(check_plan(p).empty());
    CHECK(p.min_gap() >= p.pieces[1].half_sep - 2.0);

    auto broken = p;
    broken.pieces[1].half_sep = 20.0;
    CHECK_FALSE(check_plan(broken).empty());
    CHECK_THROWS_AS(plan_gluing(40, 1.0), std::overflow_error);
    CHECK_THROWS_AS(plan_gluing(0, 1.0), std::invalid_argument);
  }

  TEST_CASE("glued data carries one local field per piece") {
    std::vector<ConstructionParams> ps(2);
    ps[1].lambda = 8.0;
    const auto glued = assemble_gluing(ps, 0.5);
    REQUIRE(glued.pieces.size() == 2);
    CHECK(glued.pieces[1].n == scaling_law(0.5, 0.05, 8.0).n);
    // outer f ring of the lambda = 4 piece reaches 66 / 4
    CHECK(glued.plan.support_radius == doctest::Approx(16.5));
    CHECK(check_plan(glued.plan).empty());
  }
}
