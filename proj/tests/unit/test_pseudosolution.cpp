#include <cmath>
#include <numbers>
#include <vector>

#include "doctest.h"
#include "eulerinf/biot_savart.hpp"
#include "eulerinf/pseudosolution.hpp"
#include "eulerinf/sobolev.hpp"
#include "test_util.hpp"

using namespace eulerinf;

namespace {

constexpr double kPi = std::numbers::pi;

double l2(const PolarField& f) { return std::sqrt(2.0 * kPi * mode_energy(f)); }

const InitialData& desk() {
  static const InitialData d = assemble_initial(ConstructionParams{});
  return d;
}

double max_abs_diff(const PolarField& a, const PolarField& b) {
  double m = 0.0;
  for (std::size_t n = 0; n < a.coeffs().size(); ++n) m = std::max(m, std::abs(a.coeffs()[n] - b.coeffs()[n]));
  return m;
}

}  // namespace

TEST_SUITE("pseudosolution") {
  TEST_CASE("zero phase reproduces the initial data exactly") {
    const auto& d = desk();
    const auto s = make_pseudo(d);
    const auto bar = eval_pseudo(s);
    REQUIRE(bar.same_layout(d.omega));
    for (std::size_t n = 0; n < bar.coeffs().size(); ++n) CHECK(bar.coeffs()[n] == d.omega.coeffs()[n]);
    const auto e = pseudo_error(d.oscillatory, s);
    CHECK(e.l2_error == 0.0);
    CHECK(e.ratio == 0.0);
    CHECK(e.bound == doctest::Approx(std::pow(4.0, 1.0) / std::sqrt(18.0) * std::log(18.0)).epsilon(1e-14));
  }

  TEST_CASE("radial steady data: phase is linear in t") {
    ConstructionParams p;
    p.g.amplitude = 0.0;
    const auto d = assemble_initial(p);
    auto s = make_pseudo(d);
    const auto rate = s.rate;
    for (int k = 0; k < 7; ++k) advance_phase(s, d.omega, 0.125);
    CHECK(s.t == 0.875);
    for (std::size_t i = 0; i < rate.size(); ++i) {
      CHECK(std::abs(s.phase[i] - 0.875 * rate[i]) <= 1e-15 * std::abs(rate[i]) + 1e-300);
    }
    double peak = 0.0;
    for (double r : rate) peak = std::max(peak, std::abs(r));
    CHECK(frozen_phase_gap(s) <= 1e-15 * peak);
    CHECK(s.sign_changes == 0);
  }

  TEST_CASE("zero field keeps a zero phase") {
    ConstructionParams p;
    p.g.amplitude = 0.0;
    p.f.amplitude = 0.0;
    const auto d = assemble_initial(p);
    auto s = make_pseudo(d);
    advance_phase(s, d.omega, 0.5);
    for (double ph : s.phase) CHECK(ph == 0.0);
    CHECK(eval_pseudo_osc(s).is_zero());
    CHECK(pseudo_error(d.oscillatory, s).l2_error == 0.0);
  }

  TEST_CASE("angular rate matches the enclosed circulation") {
    // v_alpha / r = r^-2 int_0^r omega_0 s ds with omega_0 = lambda^{1-beta} f(lambda s)
    const auto& d = desk();
    const auto rate = averaged_angular_rate(d.omega);
    const auto& g = d.omega.grid();
    double peak = 0.0;
    for (double r : rate) peak = std::max(peak, std::abs(r));
    for (std::size_t i : {g.size() / 4, g.size() / 2, 3 * g.size() / 4}) {
      const double r = g.node(i);
      const int n = 20000;  // Simpson
      const double h = (r - g.r_min()) / n;
      double acc = 0.0;
      for (int k = 0; k <= n; ++k) {
        const double x = g.r_min() + k * h;
        const double w = (k == 0 || k == n) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        acc += w * 2.0 * d.f.profile(4.0 * x) * x;
      }
      acc *= h / 3.0;
      CHECK(std::abs(rate[i] - acc / (r * r)) <= 1e-6 * (std::abs(rate[i]) + 1e-3 * peak));
    }
  }

  TEST_CASE("constant phase rotates the initial data") {
    const auto& d = desk();
    auto s = make_pseudo(d);
    const double c = 0.37;
    std::fill(s.phase.begin(), s.phase.end(), c);
    const auto bar = eval_pseudo(s);
    CHECK(max_abs_diff(bar, rotate(d.omega, c)) <= 1e-12 * lp_norm(d.omega, INFINITY));
    CHECK(testutil::rel(l2(bar), l2(d.omega)) < 1e-12);
    CHECK(testutil::rel(lp_norm(bar, 1.0), lp_norm(d.omega, 1.0)) < 1e-12);
  }

  TEST_CASE("any phase leaves the L2 mass unchanged") {
    const auto& d = desk();
    auto s = make_pseudo(d);
    const double m0 = l2(eval_pseudo_osc(s));
    const auto& g = d.omega.grid();
    for (std::size_t i = 0; i < g.size(); ++i) s.phase[i] = 3.0 * g.node(i) * g.node(i) + std::sin(40.0 * g.node(i));
    CHECK(testutil::rel(l2(eval_pseudo_osc(s)), m0) < 1e-10);
  }

  TEST_CASE("sheared phase raises the positive-order norms") {
    const auto& d = desk();
    auto s = make_pseudo(d);
    const auto& g = d.omega.grid();
    SobolevSpec spec;
    spec.s = 0.5;
    double prev = 0.0;
    for (double t : {0.0, 1.0, 2.0, 4.0}) {
      // N d_r Phi = 3.6 t / r stays below 0.2 rad per cell up to t = 4
      for (std::size_t i = 0; i < g.size(); ++i) s.phase[i] = 0.2 * t * std::log(g.node(i));
      const double v = norm(eval_pseudo_osc(s), spec);
      CHECK(v > prev);
      prev = v;
    }
  }

  TEST_CASE("phase-gradient estimate of the fractional norm") {
    const auto& d = desk();
    auto s = make_pseudo(d);
    // s = 0 is the L2 norm exactly
    CHECK(hs_phase_estimate(d.oscillatory, 0.0) == doctest::Approx(l2(d.oscillatory)).epsilon(1e-13));
    // strong radial winding: the estimate tracks the transform within a few percent
    const auto& g = d.omega.grid();
    for (std::size_t i = 0; i < g.size(); ++i) s.phase[i] = 0.4 * g.node(i) * 4.0;
    const auto wound = eval_pseudo_osc(s);
    SobolevSpec spec;
    spec.s = 0.5;
    const double exact = norm(wound, spec);
    const double est = hs_phase_estimate(wound, 0.5);
    MESSAGE("H^0.5 " << exact << " estimate " << est);
    CHECK(est / exact > 0.8);
    CHECK(est / exact < 1.25);
  }

  TEST_CASE("phase converges under step refinement") {
    // desk run: phase from the CFL step against a run at a quarter of it
    const auto& d = desk();
    std::vector<std::vector<double>> phases;
    for (double factor : {1.0, 0.25}) {
      EvolveConfig c;
      c.t_end = 1.0;
      c.cfl = 0.5 * factor;
      c.monitor_dt = 0.25;
      c.dt = 0.25 * factor;
      auto s = make_pseudo(d);
      const auto res = Evolver(c).run(d.omega, std::pair{d.radial, d.oscillatory}, pseudo_observers(s));
      REQUIRE(res.termination == Termination::completed);
      CHECK(s.t == doctest::Approx(1.0).epsilon(1e-14));
      phases.push_back(s.phase);
    }
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < phases[0].size(); ++i) {
      diff = std::max(diff, std::abs(phases[0][i] - phases[1][i]));
      scale = std::max(scale, std::abs(phases[1][i]));
    }
    REQUIRE(scale > 0.0);
    CHECK(diff / scale < 1e-6);
  }

  TEST_CASE("observers append the pseudo columns") {
    const auto& d = desk();
    auto s = make_pseudo(d);
    EvolveConfig c;
    c.t_end = 0.5;
    c.monitor_dt = 0.25;
    const auto res = Evolver(c).run(d.omega, std::pair{d.radial, d.oscillatory}, pseudo_observers(s, {0.5}));
    REQUIRE(res.record.rows.size() == 3);
    const auto& extra = res.record.rows.back().extra;
    std::vector<std::string> names;
    for (const auto& [k, v] : extra) names.push_back(k);
    CHECK(names == std::vector<std::string>{"pseudo_err_l2", "pseudo_err_rel", "pseudo_bound", "phase_frozen_gap",
                                            "pseudo_hs_0.5", "pseudo_hs_est_0.5"});
    CHECK(res.record.rows.front().extra[0].second == 0.0);
    // pseudo and solution stay close over a short desk run
    CHECK(extra[1].second < 1e-2);

    // a state that is out of step with the solver is rejected
    auto late = make_pseudo(d);
    late.t = 0.3;
    CHECK_THROWS_AS(Evolver(c).run(d.omega, std::nullopt, pseudo_observers(late)), std::logic_error);
  }
}
