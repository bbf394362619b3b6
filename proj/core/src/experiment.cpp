#include "eulerinf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <ostream>
#include <thread>

#include "eulerinf/biot_savart.hpp"
#include "eulerinf/field_io.hpp"
#include "eulerinf/gluing.hpp"
#include "eulerinf/pseudosolution.hpp"
#include "eulerinf/stats.hpp"
#include "json.hpp"

namespace eulerinf {

namespace {

using nlohmann::ordered_json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// JSON has no NaN or infinity; those become null.
ordered_json jnum(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }

class Csv {
 public:
  Csv(const std::string& command, const RunConfig& cfg) {
    text_ = "# eulerinf csv schema=" + std::to_string(kSchemaVersion) + " command=" + command +
            " config_hash=" + config_hash(cfg) + "\n";
  }
  void header(const std::vector<std::string>& cols) { line(cols); }
  void row(const std::vector<std::string>& cells) { line(cells); }
  const std::string& text() const { return text_; }

 private:
  void line(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) text_ += ',';
      text_ += cells[i];
    }
    text_ += '\n';
  }
  std::string text_;
};

ordered_json stamp(const std::string& command, const RunConfig& cfg) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = command;
  j["config_hash"] = config_hash(cfg);
  j["seed"] = cfg.seed;
  return j;
}

std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

void say(const CommandContext& ctx, const std::string& msg) {
  static std::mutex mu;
  if (!ctx.log) return;
  std::lock_guard lock(mu);
  *ctx.log << msg << '\n';
}

int guarded(const CommandContext& ctx, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    say(ctx, std::string("config error: ") + e.what());
    return exit_config;
  } catch (const FieldFormatError& e) {
    say(ctx, std::string("input error: ") + e.what());
    return exit_config;
  } catch (const ResolutionError& e) {
    say(ctx, std::string("resolution: ") + e.what() + " (needs " + std::to_string(e.required_nodes()) + " nodes)");
    return exit_resolution;
  } catch (const std::invalid_argument& e) {
    say(ctx, std::string("invalid parameters: ") + e.what());
    return exit_config;
  } catch (const std::exception& e) {
    say(ctx, std::string("error: ") + e.what());
    return exit_failure;
  }
}

int exit_for(Termination t) {
  switch (t) {
    case Termination::completed:
      return exit_ok;
    case Termination::resolution:
    case Termination::step_limit:
      return exit_resolution;
    case Termination::nonfinite:
      return exit_verification;
  }
  return exit_failure;
}

ordered_json profile_json(const ProfileReport& r) {
  ordered_json j;
  j["valid"] = r.valid;
  j["h1_norm"] = jnum(r.h1_norm);
  j["radial_moment"] = jnum(r.radial_moment);
  j["moment_scale"] = jnum(r.moment_scale);
  j["support"] = {r.support.first, r.support.second};
  if (r.window) {
    j["window"] = {{"lo", r.window->lo},
                   {"hi", r.window->hi},
                   {"sign", r.window->sign},
                   {"sign_definite", r.window->sign_definite},
                   {"min", jnum(r.window->min_value)},
                   {"max", jnum(r.window->max_value)},
                   {"M", jnum(r.window->m)}};
  }
  j["failures"] = r.failures;
  j["notes"] = r.notes;
  return j;
}

ordered_json initial_json(const InitialData& d) {
  ordered_json j;
  j["valid"] = d.valid;
  j["failures"] = d.failures;
  j["n"] = d.n;
  j["scaling_law"] = {{"n_exact", d.law.n_exact},
                      {"residual", d.law.residual},
                      {"beta_critical", d.law.beta_critical},
                      {"beta_delta", d.law.beta_delta}};
  j["h_beta_norm"] = jnum(d.h_beta_norm);
  j["circulation"] = jnum(d.circulation);
  j["l1"] = jnum(d.l1);
  const auto& g = d.omega.grid();
  j["grid"] = {{"nodes", g.size()}, {"r_min", g.r_min()}, {"r_max", g.r_max()}, {"k_max", d.omega.k_max()}};
  j["f"] = profile_json(d.f.report);
  j["g"] = profile_json(d.g.report);
  return j;
}

// Initial data from the config; a stored field replaces the constructed one.
InitialData initial_for(const RunConfig& cfg, bool& from_file) {
  from_file = !cfg.output.field.empty();
  if (!from_file) return assemble_initial(cfg.construction);
  if (!std::filesystem::is_regular_file(cfg.output.field)) {
    throw ConfigError("output.field: no such file '" + cfg.output.field + "'");
  }
  InitialData d;
  d.params = cfg.construction;
  d.omega = load_field(cfg.output.field);
  d.radial = angular_average(d.omega);
  d.oscillatory = d.omega - d.radial;
  d.l1 = lp_norm(d.omega, 1.0);
  d.n = d.omega.stride();
  return d;
}

double rel_change(double a, double b) { return a != 0.0 ? std::abs(b - a) / std::abs(a) : std::abs(b); }

}  // namespace

std::filesystem::path output_stem(const RunConfig& cfg, const CommandContext& ctx, const std::string& command) {
  const std::filesystem::path dir = ctx.out_dir.empty() ? std::filesystem::path(cfg.output.dir) : ctx.out_dir;
  return dir / (cfg.output.name + "." + command);
}

EvolveOutcome run_evolve(const RunConfig& cfg) {
  validate(cfg);
  EvolveOutcome out;
  bool from_file = false;
  out.data = initial_for(cfg, from_file);
  const auto& d = out.data;

  const bool pseudo = cfg.diagnostics.pseudo && !from_file;
  std::optional<PseudoState> ps;
  RunObservers obs;
  if (pseudo) {
    ps = make_pseudo(d);
    obs = pseudo_observers(*ps, cfg.evolve.hs_orders, cfg.evolve.hs_method);
  }
  out.run = Evolver(cfg.evolve).run(d.omega, std::pair{d.radial, d.oscillatory}, obs);
  const auto& rows = out.run.record.rows;

  Csv csv("evolve", cfg);
  std::vector<std::string> cols{"t",           "step",        "dt",          "l1",          "l2",
                                "linf",        "supp_osc_lo", "supp_osc_hi", "supp_rad_lo", "supp_rad_hi",
                                "osc_l2",      "c1_osc",      "kappa_rms",   "decomposition_error",
                                "rad_drift"};
  for (double s : cfg.evolve.hs_orders) cols.push_back("hs_" + order_label(s));
  if (!rows.empty()) {
    for (const auto& [name, v] : rows.front().extra) cols.push_back(name);
  }
  csv.header(cols);
  for (const auto& r : rows) {
    std::vector<std::string> cells{num(r.t),           std::to_string(r.step), num(r.dt),
                                   num(r.l1),          num(r.l2),              num(r.linf),
                                   num(r.supp_osc_lo), num(r.supp_osc_hi),     num(r.supp_rad_lo),
                                   num(r.supp_rad_hi), num(r.osc_l2),          num(r.c1_osc),
                                   num(r.osc_wavenumber), num(r.decomposition_error), num(r.rad_drift)};
    for (double v : r.hs) cells.push_back(num(v));
    for (const auto& [name, v] : r.extra) cells.push_back(num(v));
    csv.row(cells);
  }
  out.csv = csv.text();

  auto j = stamp("evolve", cfg);
  j["source"] = from_file ? cfg.output.field : std::string("construction");
  j["initial"] = from_file ? ordered_json{{"from_file", true}} : initial_json(d);
  j["termination"] = to_string(out.run.termination);
  j["detail"] = out.run.detail;
  j["steps"] = out.run.final.steps;
  j["t_final"] = out.run.final.t;
  j["dt_min"] = out.run.dt_min;
  j["dt_max"] = out.run.dt_max;
  j["cfl_reductions"] = out.run.cfl_reductions;
  if (!rows.empty()) {
    const auto& a = rows.front();
    const auto& b = rows.back();
    j["conservation"] = {{"l1_rel", rel_change(a.l1, b.l1)},
                         {"l2_rel", rel_change(a.l2, b.l2)},
                         {"linf_rel", rel_change(a.linf, b.linf)},
                         {"max_decomposition_error", 0.0}};
    double dec = 0.0, lo = INFINITY, hi = 0.0;
    for (const auto& r : rows) {
      dec = std::max(dec, r.decomposition_error);
      if (r.supp_osc_hi > 0.0) {
        lo = std::min(lo, r.supp_osc_lo);
        hi = std::max(hi, r.supp_osc_hi);
      }
    }
    j["conservation"]["max_decomposition_error"] = dec;
    const double lam = cfg.construction.lambda;
    j["osc_support"] = {{"min", jnum(lo)},
                        {"max", hi},
                        {"window", {1.0 / (4.0 * lam), 6.0 / lam}},
                        {"inside_window", hi == 0.0 || (lo > 1.0 / (4.0 * lam) && hi < 6.0 / lam)}};
    ordered_json growth;
    for (std::size_t k = 0; k < cfg.evolve.hs_orders.size(); ++k) {
      const double h0 = a.hs[k];
      growth["hs_" + order_label(cfg.evolve.hs_orders[k])] = jnum(h0 > 0.0 ? b.hs[k] / h0 : 1.0);
    }
    j["hs_growth"] = growth;
  }
  if (cfg.diagnostics.inflation && !cfg.evolve.hs_orders.empty() && !rows.empty()) {
    out.inflation = inflation_measure(out.run.record, {cfg.construction.lambda, cfg.construction.beta, d.n},
                                      cfg.diagnostics.inflation_order);
    const auto& inf = *out.inflation;
    j["inflation"] = {{"beta_prime", inf.beta_prime},
                      {"growth_factor", jnum(inf.growth_factor)},
                      {"monotone_after_transient", inf.monotone_after_transient},
                      {"first_decrease", inf.first_decrease},
                      {"predicted_over_measured_min", jnum(inf.min_ratio)},
                      {"predicted_over_measured_max", jnum(inf.max_ratio)},
                      {"asymptotic_final", jnum(inf.asymptotic.back())}};
  }
  if (cfg.diagnostics.c1_envelope && !from_file) {
    out.envelope = fit_c1_envelope(out.run.record, cfg.construction.lambda, cfg.construction.beta, d.n);
    j["c1_envelope"] = out.envelope ? ordered_json{{"a", jnum(out.envelope->a)}, {"c", jnum(out.envelope->c)}}
                                    : ordered_json(nullptr);
  }
  if (pseudo && !rows.empty()) {
    for (const auto& [name, v] : rows.back().extra) {
      if (name == "pseudo_err_rel") j["pseudo"]["final_err_rel"] = jnum(v);
      if (name == "pseudo_bound") j["pseudo"]["bound"] = jnum(v);
    }
    j["pseudo"]["phase_sign_changes"] = ps->sign_changes;
  }
  out.exit_code = exit_for(out.run.termination);
  j["exit_code"] = out.exit_code;
  out.summary_json = dump(j);
  return out;
}

int cmd_evolve(const RunConfig& cfg, const CommandContext& ctx) {
  return guarded(ctx, [&] {
    const auto stem = output_stem(cfg, ctx, "evolve");
    say(ctx, "evolve: " + stem.string());
    const auto out = run_evolve(cfg);
    write_file_atomic(stem.string() + ".csv", out.csv);
    write_file_atomic(stem.string() + ".json", out.summary_json);
    say(ctx, "evolve: " + to_string(out.run.termination) + " after " + std::to_string(out.run.final.steps) +
                 " steps, t = " + num(out.run.final.t));
    return out.exit_code;
  });
}

int cmd_build(const RunConfig& cfg, const CommandContext& ctx) {
  return guarded(ctx, [&] {
    validate(cfg);
    const auto stem = output_stem(cfg, ctx, "build");
    const auto d = assemble_initial(cfg.construction);
    save_field(stem.string() + ".omega.json", d.omega);
    save_field(stem.string() + ".radial.json", d.radial);
    save_field(stem.string() + ".oscillatory.json", d.oscillatory);
    auto j = stamp("build", cfg);
    j["report"] = initial_json(d);
    write_file_atomic(stem.string() + ".json", dump(j));
    say(ctx, std::string("build: ") + (d.valid ? "valid" : "INVALID") + ", N = " + std::to_string(d.n) +
                 ", H^beta = " + num(d.h_beta_norm));
    for (const auto& f : d.failures) say(ctx, "  " + f);
    return d.valid ? exit_ok : exit_verification;
  });
}

int cmd_norms(const RunConfig& cfg, const CommandContext& ctx) {
  return guarded(ctx, [&] {
    validate(cfg);
    bool from_file = false;
    const auto d = initial_for(cfg, from_file);
    auto j = stamp("norms", cfg);
    j["source"] = from_file ? cfg.output.field : std::string("construction");
    j["nodes"] = d.omega.n_r();
    j["k_max"] = d.omega.k_max();
    j["l1"] = lp_norm(d.omega, 1.0);
    j["l2"] = lp_norm(d.omega, 2.0);
    j["linf"] = lp_norm(d.omega, INFINITY);
    ordered_json list = ordered_json::array();
    for (double s : cfg.norms.orders) {
      SobolevSpec spec;
      spec.s = s;
      spec.method = cfg.norms.method;
      spec.homogeneous = cfg.norms.homogeneous;
      validate(spec);
      const double v = norm(d.omega, spec);
      list.push_back({{"s", s}, {"method", to_string(spec.method)}, {"homogeneous", spec.homogeneous},
                      {"value", jnum(v)}});
      say(ctx, "norms: s = " + num(s) + "  " + num(v));
    }
    j["norms"] = list;
    write_file_atomic(output_stem(cfg, ctx, "norms").string() + ".json", dump(j));
    return exit_ok;
  });
}

int cmd_decay(const RunConfig& cfg, const CommandContext& ctx) {
  return guarded(ctx, [&] {
    validate(cfg);
    const RadialProfile g({Bump{cfg.decay.lo, cfg.decay.hi, 1.0}});
    auto ns = cfg.decay.n_values;
    std::sort(ns.begin(), ns.end());
    const auto table = exp_decay_scan(g, cfg.decay.lo, cfg.decay.hi, ns, cfg.decay.r_probe);
    Csv csv("decay", cfg);
    csv.header({"n", "vr_max", "log_vr_max"});
    std::vector<double> xs, ys;
    for (const auto& r : table.rows) {
      csv.row({std::to_string(r.n), num(r.vr_max), num(std::log(r.vr_max))});
      if (r.vr_max > 0.0) {
        xs.push_back(r.n);
        ys.push_back(std::log(r.vr_max));
      }
    }
    const auto stem = output_stem(cfg, ctx, "decay");
    write_file_atomic(stem.string() + ".csv", csv.text());
    auto j = stamp("decay", cfg);
    j["r_probe"] = cfg.decay.r_probe;
    j["support"] = {cfg.decay.lo, cfg.decay.hi};
    if (const auto fit = ols(xs, ys)) {
      j["slope"] = fit->slope;
      j["slope_ci95"] = fit->slope_ci95;
      say(ctx, "decay: slope d log|v_r| / dN = " + num(fit->slope));
    } else {
      j["slope"] = nullptr;
    }
    write_file_atomic(stem.string() + ".json", dump(j));
    return exit_ok;
  });
}

int cmd_loglip(const RunConfig& cfg, const CommandContext& ctx) {
  return guarded(ctx, [&] {
    validate(cfg);
    bool from_file = false;
    const auto d = initial_for(cfg, from_file);
    const auto rep = loglip_modulus(d.omega, cfg.loglip.pairs, cfg.seed, cfg.loglip.threshold);
    auto j = stamp("loglip", cfg);
    j["constant"] = rep.constant;
    j["r_inner"] = rep.r_inner;
    j["r_outer"] = rep.r_outer;
    j["pairs"] = rep.pairs;
    write_file_atomic(output_stem(cfg, ctx, "loglip").string() + ".json", dump(j));
    say(ctx, "loglip: constant " + num(rep.constant));
    return exit_ok;
  });
}

namespace {

struct SweepRow {
  double value = 0.0;
  int n = 0;
  int k_max = 0;
  std::size_t nodes = 0;
  bool valid = false;
  std::string status = "ok";
  std::string termination;
  int exit_code = exit_ok;
  double hs_growth = NAN;
  double pseudo_err_rel = NAN;
  double final_hs = NAN;
};

RunConfig sweep_point(const RunConfig& base, double value) {
  RunConfig c = base;
  const auto& axis = base.sweep.axis;
  if (axis == "lambda") {
    c.construction.lambda = value;
  } else if (axis == "n") {
    c.construction.n_override = static_cast<int>(std::lround(value));
  } else if (axis == "beta") {
    c.construction.beta = value;
  } else if (axis == "s") {
    c.evolve.hs_orders = {value};
    c.diagnostics.inflation_order = value;
  }
  return c;
}

// Runs body(k) for k in [0, n) on `workers` threads; results are indexed so
// the worker count never changes the output.
void parallel_for(std::size_t n, std::size_t workers, const std::function<void(std::size_t)>& body) {
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next++) < n;) body(k);
  };
  const std::size_t threads = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < threads; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();
}

}  // namespace

int cmd_sweep(const RunConfig& cfg, const CommandContext& ctx) {
  return guarded(ctx, [&] {
    validate(cfg);
    const auto stem = output_stem(cfg, ctx, "sweep");
    const auto& values = cfg.sweep.values;
    std::vector<SweepRow> rows(values.size());
    parallel_for(values.size(), ctx.workers, [&](std::size_t k) {
      SweepRow& row = rows[k];
      row.value = values[k];
      try {
        const auto point = sweep_point(cfg, values[k]);
        const auto out = run_evolve(point);
        row.n = out.data.n;
        row.k_max = out.data.omega.k_max();
        row.nodes = out.data.omega.n_r();
        row.valid = out.data.valid;
        row.termination = to_string(out.run.termination);
        row.exit_code = out.exit_code;
        const auto& recs = out.run.record.rows;
        if (out.inflation) row.hs_growth = out.inflation->growth_factor;
        if (!recs.empty() && !recs.back().hs.empty()) {
          const auto& ord = point.evolve.hs_orders;
          const auto it = std::find(ord.begin(), ord.end(), point.diagnostics.inflation_order);
          row.final_hs = recs.back().hs[it != ord.end() ? static_cast<std::size_t>(it - ord.begin()) : 0];
        }
        if (!recs.empty()) {
          for (const auto& [name, v] : recs.back().extra) {
            if (name == "pseudo_err_rel") row.pseudo_err_rel = v;
          }
        }
        write_file_atomic(stem.string() + ".run" + std::to_string(k) + ".csv", out.csv);
        say(ctx, "sweep: " + cfg.sweep.axis + " = " + num(values[k]) + " " + row.termination);
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
        row.exit_code = dynamic_cast<const ResolutionError*>(&e) ? exit_resolution : exit_failure;
        say(ctx, "sweep: " + cfg.sweep.axis + " = " + num(values[k]) + " failed: " + e.what());
      }
    });

    Csv csv("sweep", cfg);
    csv.header({"index", "axis", "value", "n", "k_max", "nodes", "valid", "status", "termination", "exit_code",
                "hs_growth", "pseudo_err_rel", "final_hs", "measure"});
    std::vector<double> xs, ys;
    const bool log_x = std::all_of(values.begin(), values.end(), [](double v) { return v > 0.0; });
    for (std::size_t k = 0; k < rows.size(); ++k) {
      const auto& r = rows[k];
      const double m = cfg.sweep.measure == "hs_growth"      ? r.hs_growth
                       : cfg.sweep.measure == "pseudo_error" ? r.pseudo_err_rel
                                                             : r.final_hs;
      std::string status = r.status;
      std::replace(status.begin(), status.end(), ',', ';');
      std::replace(status.begin(), status.end(), '\n', ' ');
      csv.row({std::to_string(k), cfg.sweep.axis, num(r.value), std::to_string(r.n), std::to_string(r.k_max),
               std::to_string(r.nodes), r.valid ? "1" : "0", status, r.termination, std::to_string(r.exit_code),
               num(r.hs_growth), num(r.pseudo_err_rel), num(r.final_hs), num(m)});
      if (r.status == "ok" && m > 0.0 && std::isfinite(m)) {
        xs.push_back(log_x ? std::log(r.value) : r.value);
        ys.push_back(std::log(m));
      }
    }
    write_file_atomic(stem.string() + ".csv", csv.text());

    auto j = stamp("sweep", cfg);
    j["axis"] = cfg.sweep.axis;
    j["measure"] = cfg.sweep.measure;
    j["x_scale"] = log_x ? "log" : "linear";
    j["runs"] = rows.size();
    j["failed"] = std::count_if(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status != "ok"; });
    if (const auto fit = ols(xs, ys)) {
      j["slope"] = fit->slope;
      j["slope_stderr"] = fit->slope_stderr;
      j["slope_ci95"] = fit->slope_ci95;
      j["intercept"] = fit->intercept;
    } else {
      j["slope"] = nullptr;
    }
    write_file_atomic(stem.string() + ".json", dump(j));
    return exit_ok;
  });
}

int cmd_glue(const RunConfig& cfg, const CommandContext& ctx) {
  return guarded(ctx, [&] {
    validate(cfg);
    if (!(cfg.evolve.monitor_dt > 0.0)) throw ConfigError("glue needs evolve.monitor_dt > 0");
    const auto stem = output_stem(cfg, ctx, "glue");
    const int pieces = cfg.glue.pieces;
    std::vector<ConstructionParams> params(static_cast<std::size_t>(pieces), cfg.construction);
    for (int j = 0; j < pieces; ++j) params[j].lambda = cfg.construction.lambda * std::pow(cfg.glue.lambda_ratio, j);

    double v_max = cfg.glue.v_max;
    if (v_max == 0.0) {
      // sum of the initial piece velocities, each at its amplitude 2^-j
      std::vector<double> vs(params.size());
      parallel_for(params.size(), ctx.workers, [&](std::size_t k) {
        vs[k] = std::ldexp(velocity_sup(assemble_initial(params[k]).omega), -static_cast<int>(k) - 1);
      });
      for (double v : vs) v_max += v;
    }
    const auto glued = assemble_gluing(params, v_max);
    say(ctx, "glue: " + std::to_string(pieces) + " pieces, v_max = " + num(v_max));
    const auto runs = run_pieces(glued, cfg.evolve, ctx.workers);

    const auto& orders = cfg.evolve.hs_orders;
    Csv pcsv("glue", cfg);
    std::vector<std::string> cols{"piece", "j", "t", "v_sup", "support_radius"};
    for (double s : orders) cols.push_back("hs_" + order_label(s));
    pcsv.header(cols);
    for (std::size_t p = 0; p < runs.size(); ++p) {
      const auto& r = runs[p];
      for (std::size_t k = 0; k < r.t.size(); ++k) {
        std::vector<std::string> cells{std::to_string(p), std::to_string(r.piece.j), num(r.t[k]), num(r.v_sup[k]),
                                       num(r.support_radius[k])};
        for (double h : r.local.record.rows[k].hs) cells.push_back(num(r.piece.amplitude * h));
        pcsv.row(cells);
      }
    }
    write_file_atomic(stem.string() + ".pieces.csv", pcsv.text());

    std::size_t common = runs.front().t.size();
    for (const auto& r : runs) common = std::min(common, r.t.size());

    Csv icsv("glue", cfg);
    icsv.header({"t", "source", "target", "distance", "far_field_bound", "cross_velocity", "cross_quadrature",
                 "self_velocity", "ratio", "bound_ratio", "overlap"});
    double max_ratio = 0.0, max_bound_ratio = 0.0, max_quad_gap = 0.0;
    bool overlap = false;
    for (std::size_t k = 0; k < common; ++k) {
      for (const auto& p : interaction_bound(glued.plan, runs, k)) {
        icsv.row({num(runs.front().t[k]), std::to_string(p.source), std::to_string(p.target), num(p.distance),
                  num(p.far_field_bound), num(p.cross_velocity), num(p.cross_quadrature), num(p.self_velocity),
                  num(p.ratio), num(p.bound_ratio), p.overlap ? "1" : "0"});
        overlap = overlap || p.overlap;
        max_ratio = std::max(max_ratio, p.ratio);
        max_bound_ratio = std::max(max_bound_ratio, p.bound_ratio);
        if (p.cross_quadrature > 0.0) {
          max_quad_gap = std::max(max_quad_gap, std::abs(p.cross_velocity - p.cross_quadrature) / p.cross_quadrature);
        }
      }
    }
    write_file_atomic(stem.string() + ".interactions.csv", icsv.text());

    Csv bcsv("glue", cfg);
    bcsv.header({"t", "s", "sum_of_norms", "orthogonal_bound", "max_single", "cross_bound", "min_distance",
                 "disjoint"});
    ordered_json final_bounds = ordered_json::array();
    for (double s : cfg.glue.norm_orders) {
      SobolevSpec spec;
      spec.s = s;
      for (std::size_t k = 0; k < common; ++k) {
        const auto b = glued_norm_lower_bound(glued.plan, runs, k, spec);
        bcsv.row({num(runs.front().t[k]), num(s), num(b.sum_of_norms), num(b.orthogonal_bound), num(b.max_single),
                  num(b.cross_bound), num(b.min_distance), b.disjoint ? "1" : "0"});
        if (k + 1 == common) {
          final_bounds.push_back({{"s", s},
                                  {"sum_of_norms", b.sum_of_norms},
                                  {"orthogonal_bound", b.orthogonal_bound},
                                  {"max_single", b.max_single},
                                  {"disjoint", b.disjoint}});
        }
      }
    }
    write_file_atomic(stem.string() + ".bounds.csv", bcsv.text());

    auto j = stamp("glue", cfg);
    j["v_max"] = v_max;
    ordered_json plan = ordered_json::array();
    for (const auto& p : glued.plan.pieces) {
      plan.push_back({{"j", p.j},
                      {"center", p.center},
                      {"half_sep", p.half_sep},
                      {"amplitude", p.amplitude},
                      {"time_dilation", p.time_dilation}});
    }
    j["plan"] = {{"support_radius", glued.plan.support_radius},
                 {"min_gap", glued.plan.min_gap()},
                 {"pieces", plan},
                 {"failures", check_plan(glued.plan)}};
    ordered_json per = ordered_json::array();
    int code = exit_ok;
    for (std::size_t p = 0; p < runs.size(); ++p) {
      const auto& r = runs[p];
      ordered_json e{{"j", r.piece.j},
                     {"lambda", params[p].lambda},
                     {"n", glued.pieces[p].n},
                     {"termination", to_string(r.local.termination)},
                     {"v_max", r.v_max},
                     {"support_within_margin", r.support_within_margin}};
      const auto& recs = r.local.record.rows;
      const auto it = std::find(orders.begin(), orders.end(), cfg.diagnostics.inflation_order);
      if (it != orders.end() && !recs.empty()) {
        const auto col = static_cast<std::size_t>(it - orders.begin());
        const double h0 = recs.front().hs[col];
        e["hs_growth"] = jnum(h0 > 0.0 ? recs.back().hs[col] / h0 : 1.0);
      }
      per.push_back(e);
      code = std::max(code, exit_for(r.local.termination));
    }
    j["pieces"] = per;
    j["interaction"] = {{"max_ratio", max_ratio},
                        {"max_bound_ratio", max_bound_ratio},
                        {"max_quadrature_gap", max_quad_gap},
                        {"overlap", overlap}};
    j["bounds_final"] = final_bounds;
    if (overlap && code == exit_ok) code = exit_verification;
    j["exit_code"] = code;
    write_file_atomic(stem.string() + ".json", dump(j));
    say(ctx, "glue: max interaction ratio " + num(max_ratio));
    return code;
  });
}

std::vector<std::string> command_names() { return {"build", "evolve", "sweep", "glue", "norms", "decay", "loglip"}; }

int run_command(const std::string& name, const RunConfig& cfg, const CommandContext& ctx) {
  if (name == "build") return cmd_build(cfg, ctx);
  if (name == "evolve") return cmd_evolve(cfg, ctx);
  if (name == "sweep") return cmd_sweep(cfg, ctx);
  if (name == "glue") return cmd_glue(cfg, ctx);
  if (name == "norms") return cmd_norms(cfg, ctx);
  if (name == "decay") return cmd_decay(cfg, ctx);
  if (name == "loglip") return cmd_loglip(cfg, ctx);
  say(ctx, "unknown command '" + name + "'");
  return exit_config;
}

}  // namespace eulerinf
