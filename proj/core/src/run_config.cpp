#include "eulerinf/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

namespace eulerinf {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest text that reads back to the same double.
std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double to_double(std::string_view s) {
  s = trim(s);
  if (s == "inf") return INFINITY;
  if (s == "-inf") return -INFINITY;
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("expected a number, got '" + std::string(s) + "'");
  }
  return v;
}

template <class Int>
Int to_int(std::string_view s) {
  s = trim(s);
  Int v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw ConfigError("expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

bool to_bool(std::string_view s) {
  s = trim(s);
  if (s == "true") return true;
  if (s == "false") return false;
  throw ConfigError("expected true or false, got '" + std::string(s) + "'");
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  s = trim(s);
  if (s.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = s.find(',', start);
    out.push_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

struct Binding {
  std::function<std::string(const RunConfig&)> get;
  std::function<void(RunConfig&, std::string_view)> set;
};

using Table = std::map<std::string, Binding, std::less<>>;

Binding real_at(std::function<double&(RunConfig&)> ref) {
  return {[=](const RunConfig& c) { return fmt(ref(const_cast<RunConfig&>(c))); },
          [=](RunConfig& c, std::string_view v) { ref(c) = to_double(v); }};
}

Binding opt_real_at(std::function<std::optional<double>&(RunConfig&)> ref) {
  return {[=](const RunConfig& c) {
            const auto& o = ref(const_cast<RunConfig&>(c));
            return o ? fmt(*o) : std::string("none");
          },
          [=](RunConfig& c, std::string_view v) {
            if (trim(v) == "none") {
              ref(c).reset();
            } else {
              ref(c) = to_double(v);
            }
          }};
}

template <class Int>
Binding int_at(std::function<Int&(RunConfig&)> ref) {
  return {[=](const RunConfig& c) { return std::to_string(ref(const_cast<RunConfig&>(c))); },
          [=](RunConfig& c, std::string_view v) { ref(c) = to_int<Int>(v); }};
}

Binding bool_at(std::function<bool&(RunConfig&)> ref) {
  return {[=](const RunConfig& c) { return std::string(ref(const_cast<RunConfig&>(c)) ? "true" : "false"); },
          [=](RunConfig& c, std::string_view v) { ref(c) = to_bool(v); }};
}

Binding string_at(std::function<std::string&(RunConfig&)> ref) {
  return {[=](const RunConfig& c) { return ref(const_cast<RunConfig&>(c)); },
          [=](RunConfig& c, std::string_view v) { ref(c) = std::string(trim(v)); }};
}

Binding reals_at(std::function<std::vector<double>&(RunConfig&)> ref) {
  return {[=](const RunConfig& c) {
            std::string out;
            for (double x : ref(const_cast<RunConfig&>(c))) out += (out.empty() ? "" : ", ") + fmt(x);
            return out;
          },
          [=](RunConfig& c, std::string_view v) {
            std::vector<double> out;
            for (auto item : split_list(v)) out.push_back(to_double(item));
            ref(c) = std::move(out);
          }};
}

Binding ints_at(std::function<std::vector<int>&(RunConfig&)> ref) {
  return {[=](const RunConfig& c) {
            std::string out;
            for (int x : ref(const_cast<RunConfig&>(c))) out += (out.empty() ? "" : ", ") + std::to_string(x);
            return out;
          },
          [=](RunConfig& c, std::string_view v) {
            std::vector<int> out;
            for (auto item : split_list(v)) out.push_back(to_int<int>(item));
            ref(c) = std::move(out);
          }};
}

Binding method_at(std::function<SobolevMethod&(RunConfig&)> ref) {
  return {[=](const RunConfig& c) { return to_string(ref(const_cast<RunConfig&>(c))); },
          [=](RunConfig& c, std::string_view v) {
            try {
              ref(c) = method_from_string(std::string(trim(v)));
            } catch (const std::invalid_argument& e) {
              throw ConfigError(e.what());
            }
          }};
}

#define REF(type, expr) std::function<type&(RunConfig&)>([](RunConfig& c) -> type& { return c.expr; })

const Table& table() {
  static const Table t = [] {
    Table t;
    t["construction.beta"] = real_at(REF(double, construction.beta));
    t["construction.delta"] = real_at(REF(double, construction.delta));
    t["construction.lambda"] = real_at(REF(double, construction.lambda));
    t["construction.beta_target"] = opt_real_at(REF(std::optional<double>, construction.beta_target));
    t["construction.n_override"] = {
        [](const RunConfig& c) {
          return c.construction.n_override ? std::to_string(*c.construction.n_override) : std::string("none");
        },
        [](RunConfig& c, std::string_view v) {
          if (trim(v) == "none") {
            c.construction.n_override.reset();
          } else {
            c.construction.n_override = to_int<int>(v);
          }
        }};
    t["construction.f.tilde_lo"] = real_at(REF(double, construction.f.tilde_lo));
    t["construction.f.tilde_hi"] = real_at(REF(double, construction.f.tilde_hi));
    t["construction.f.lambda0"] = real_at(REF(double, construction.f.lambda0));
    t["construction.f.amplitude"] = opt_real_at(REF(std::optional<double>, construction.f.amplitude));
    t["construction.f.h1_target"] = real_at(REF(double, construction.f.h1_target));
    t["construction.f.h1_limit"] = real_at(REF(double, construction.f.h1_limit));
    t["construction.f.m_limit"] = opt_real_at(REF(std::optional<double>, construction.f.m_limit));
    t["construction.g.lo"] = real_at(REF(double, construction.g.lo));
    t["construction.g.hi"] = real_at(REF(double, construction.g.hi));
    t["construction.g.amplitude"] = opt_real_at(REF(std::optional<double>, construction.g.amplitude));
    t["construction.g.h1_target"] = real_at(REF(double, construction.g.h1_target));
    t["construction.g.h1_limit"] = real_at(REF(double, construction.g.h1_limit));
    t["construction.grid.nodes_per_decade"] = real_at(REF(double, construction.grid.nodes_per_decade));
    t["construction.grid.k_factor"] = int_at<int>(REF(int, construction.grid.k_factor));
    t["construction.grid.margin"] = real_at(REF(double, construction.grid.margin));
    t["construction.grid.min_support_nodes"] = int_at<std::size_t>(REF(std::size_t, construction.grid.min_support_nodes));

    t["evolve.t_end"] = real_at(REF(double, evolve.t_end));
    t["evolve.cfl"] = real_at(REF(double, evolve.cfl));
    t["evolve.dealias"] = bool_at(REF(bool, evolve.dealias));
    t["evolve.filter_strength"] = real_at(REF(double, evolve.filter_strength));
    t["evolve.dt"] = real_at(REF(double, evolve.dt));
    t["evolve.monitor_stride"] = int_at<std::size_t>(REF(std::size_t, evolve.monitor_stride));
    t["evolve.monitor_dt"] = real_at(REF(double, evolve.monitor_dt));
    t["evolve.hs_orders"] = reals_at(REF(std::vector<double>, evolve.hs_orders));
    t["evolve.hs_method"] = method_at(REF(SobolevMethod, evolve.hs_method));
    t["evolve.track_parts"] = bool_at(REF(bool, evolve.track_parts));
    t["evolve.guard_cells"] = real_at(REF(double, evolve.guard_cells));
    t["evolve.support_threshold"] = real_at(REF(double, evolve.support_threshold));
    t["evolve.max_steps"] = int_at<std::size_t>(REF(std::size_t, evolve.max_steps));

    t["diagnostics.pseudo"] = bool_at(REF(bool, diagnostics.pseudo));
    t["diagnostics.inflation"] = bool_at(REF(bool, diagnostics.inflation));
    t["diagnostics.inflation_order"] = real_at(REF(double, diagnostics.inflation_order));
    t["diagnostics.c1_envelope"] = bool_at(REF(bool, diagnostics.c1_envelope));

    t["decay.n_values"] = ints_at(REF(std::vector<int>, decay.n_values));
    t["decay.lo"] = real_at(REF(double, decay.lo));
    t["decay.hi"] = real_at(REF(double, decay.hi));
    t["decay.r_probe"] = real_at(REF(double, decay.r_probe));

    t["loglip.pairs"] = int_at<std::size_t>(REF(std::size_t, loglip.pairs));
    t["loglip.threshold"] = real_at(REF(double, loglip.threshold));

    t["norms.orders"] = reals_at(REF(std::vector<double>, norms.orders));
    t["norms.method"] = method_at(REF(SobolevMethod, norms.method));
    t["norms.homogeneous"] = bool_at(REF(bool, norms.homogeneous));

    t["sweep.axis"] = string_at(REF(std::string, sweep.axis));
    t["sweep.values"] = reals_at(REF(std::vector<double>, sweep.values));
    t["sweep.measure"] = string_at(REF(std::string, sweep.measure));

    t["glue.pieces"] = int_at<int>(REF(int, glue.pieces));
    t["glue.v_max"] = real_at(REF(double, glue.v_max));
    t["glue.lambda_ratio"] = real_at(REF(double, glue.lambda_ratio));
    t["glue.norm_orders"] = reals_at(REF(std::vector<double>, glue.norm_orders));

    t["output.dir"] = string_at(REF(std::string, output.dir));
    t["output.name"] = string_at(REF(std::string, output.name));
    t["output.field"] = string_at(REF(std::string, output.field));

    t["seed"] = int_at<std::uint64_t>(REF(std::uint64_t, seed));
    return t;
  }();
  return t;
}

#undef REF

void assign(RunConfig& cfg, std::string_view key, std::string_view value) {
  const auto it = table().find(key);
  if (it == table().end()) throw ConfigError("unknown key '" + std::string(key) + "'");
  try {
    it->second.set(cfg, value);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(key) + ": " + e.what());
  }
}

void check_order(double s, const std::string& where) {
  if (!(s > -1.0 && s <= 1.0)) throw ConfigError(where + ": order " + fmt(s) + " outside (-1, 1]");
}

}  // namespace

RunConfig::RunConfig() {
  evolve.monitor_dt = 0.1;
  evolve.hs_orders = {0.5};
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::set<std::string, std::less<>> seen;
  std::string section;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = "line " + std::to_string(line_no);
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(where + ": expected key = value");
    const auto local = trim(line.substr(0, eq));
    if (local.empty()) throw ConfigError(where + ": empty key");
    const std::string key = section.empty() ? std::string(local) : section + "." + std::string(local);
    if (!seen.insert(key).second) throw ConfigError(where + ": key '" + key + "' given twice");
    try {
      assign(cfg, key, line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  return cfg;
}

void apply_override(RunConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) throw ConfigError("override '" + std::string(assignment) + "' is not key=value");
  assign(cfg, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

std::string serialize(const RunConfig& cfg) {
  std::string out;
  for (const auto& [key, b] : table()) {
    out += key;
    out += " = ";
    out += b.get(cfg);
    out += '\n';
  }
  return out;
}

std::string config_hash(const RunConfig& cfg) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : serialize(cfg)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& [key, b] : table()) out.push_back(key);
  return out;
}

void validate(const RunConfig& cfg) {
  try {
    cfg.evolve.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("evolve: ") + e.what());
  }
  const auto& c = cfg.construction;
  if (!(c.beta > 0.0 && c.beta < 1.0)) throw ConfigError("construction.beta must lie in (0, 1)");
  if (!(c.delta > 0.0)) throw ConfigError("construction.delta must be positive");
  if (!(c.lambda >= 1.0)) throw ConfigError("construction.lambda must be at least 1");
  if (c.grid.k_factor < 1) throw ConfigError("construction.grid.k_factor must be at least 1");
  if (!(c.grid.nodes_per_decade > 0.0)) throw ConfigError("construction.grid.nodes_per_decade must be positive");
  for (double s : cfg.evolve.hs_orders) check_order(s, "evolve.hs_orders");
  for (double s : cfg.norms.orders) check_order(s, "norms.orders");
  for (double s : cfg.glue.norm_orders) check_order(s, "glue.norm_orders");
  check_order(cfg.diagnostics.inflation_order, "diagnostics.inflation_order");
  if (cfg.diagnostics.inflation &&
      std::find(cfg.evolve.hs_orders.begin(), cfg.evolve.hs_orders.end(), cfg.diagnostics.inflation_order) ==
          cfg.evolve.hs_orders.end()) {
    throw ConfigError("diagnostics.inflation_order must be one of evolve.hs_orders");
  }
  if (cfg.decay.n_values.empty()) throw ConfigError("decay.n_values is empty");
  for (int n : cfg.decay.n_values) {
    if (n < 1) throw ConfigError("decay.n_values must be positive");
  }
  if (!(cfg.decay.lo > 0.0 && cfg.decay.hi > cfg.decay.lo)) throw ConfigError("decay needs 0 < lo < hi");
  if (!(cfg.decay.r_probe > 0.0)) throw ConfigError("decay.r_probe must be positive");
  static const std::set<std::string> axes{"lambda", "n", "beta", "s"};
  if (!axes.count(cfg.sweep.axis)) throw ConfigError("sweep.axis must be one of lambda, n, beta, s");
  static const std::set<std::string> measures{"hs_growth", "pseudo_error", "final_hs"};
  if (!measures.count(cfg.sweep.measure)) throw ConfigError("sweep.measure must be hs_growth, pseudo_error or final_hs");
  if (cfg.sweep.values.empty()) throw ConfigError("sweep.values is empty");
  const bool up = std::is_sorted(cfg.sweep.values.begin(), cfg.sweep.values.end(), std::less<>());
  const bool down = std::is_sorted(cfg.sweep.values.begin(), cfg.sweep.values.end(), std::greater<>());
  if (!up && !down) throw ConfigError("sweep.values must be monotone");
  if (cfg.sweep.axis == "s") {
    for (double s : cfg.sweep.values) check_order(s, "sweep.values");
  }
  if (cfg.glue.pieces < 1 || cfg.glue.pieces > 8) throw ConfigError("glue.pieces must lie in 1..8");
  if (!(cfg.glue.v_max >= 0.0)) throw ConfigError("glue.v_max must be non-negative");
  if (!(cfg.glue.lambda_ratio >= 1.0)) throw ConfigError("glue.lambda_ratio must be at least 1");
  if (cfg.loglip.pairs == 0) throw ConfigError("loglip.pairs must be positive");
  if (cfg.output.name.empty() || cfg.output.name.find('/') != std::string::npos) {
    throw ConfigError("output.name must be a plain file stem");
  }
}

}  // namespace eulerinf
