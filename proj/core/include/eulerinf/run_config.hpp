#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "eulerinf/construction.hpp"
#include "eulerinf/evolve.hpp"
#include "eulerinf/sobolev.hpp"

namespace eulerinf {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct DiagnosticsConfig {
  bool pseudo = true;      // pseudo-solution columns on evolve runs
  bool inflation = true;   // growth summary at inflation_order
  double inflation_order = 0.5;
  bool c1_envelope = true;
};

/// Exponential-decay scan: omega = bump(lo, hi) cos(N a), |v_r| at r_probe.
struct DecayConfig {
  std::vector<int> n_values{4, 8, 16, 32};
  double lo = 1.0;
  double hi = 2.0;
  double r_probe = 1.0 / 24.0;
};

struct LoglipConfig {
  std::size_t pairs = 4000;
  double threshold = 1e-10;
};

struct NormsConfig {
  std::vector<double> orders{-0.5, 0.0, 0.5, 1.0};
  SobolevMethod method = SobolevMethod::hankel;
  bool homogeneous = true;
};

/// Axis names: lambda, n, beta, s.
struct SweepConfig {
  std::string axis = "lambda";
  std::vector<double> values{2.0, 4.0};
  /// Monitored quantity for the fitted slope: hs_growth, pseudo_error or final_hs.
  std::string measure = "hs_growth";
};

struct GlueConfig {
  int pieces = 3;
  /// Plan velocity bound; 0 means measure sup |v| of the first piece.
  double v_max = 0.0;
  /// lambda_j = construction.lambda * lambda_ratio^(j-1).
  double lambda_ratio = 1.0;
  std::vector<double> norm_orders{0.5};
};

struct OutputConfig {
  std::string dir = "out";
  std::string name = "run";
  /// Optional prebuilt field for evolve and norms; empty means build in line.
  std::string field;
};

struct RunConfig {
  ConstructionParams construction;
  EvolveConfig evolve;
  DiagnosticsConfig diagnostics;
  DecayConfig decay;
  LoglipConfig loglip;
  NormsConfig norms;
  SweepConfig sweep;
  GlueConfig glue;
  OutputConfig output;
  std::uint64_t seed = 1;

  RunConfig();
};

/// Parses `key = value` lines (optionally under `[section]` headers that
/// prefix the keys) on top of the defaults. `#` starts a comment. Unknown or
/// repeated keys and unparsable values throw ConfigError naming the line.
RunConfig parse_config(std::string_view text);
/// Applies one `key=value` override.
void apply_override(RunConfig& cfg, std::string_view assignment);
/// Every key, sorted, one `key = value` per line. parse_config inverts it.
std::string serialize(const RunConfig& cfg);
/// FNV-1a 64 of serialize(cfg), 16 hex digits.
std::string config_hash(const RunConfig& cfg);
/// All recognised keys in sorted order.
std::vector<std::string> config_keys();
/// Range and consistency checks; throws ConfigError.
void validate(const RunConfig& cfg);

}  // namespace eulerinf
