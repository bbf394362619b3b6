#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "eulerinf/construction.hpp"
#include "eulerinf/evolve.hpp"
#include "eulerinf/inflation.hpp"
#include "eulerinf/run_config.hpp"

namespace eulerinf {

/// Process exit codes of the front end.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,        // unexpected error
  exit_verification = 2,   // data or run failed a check
  exit_resolution = 3,     // grid or step resolution exhausted
  exit_config = 4,         // bad config, override or input file
};

/// Stamped into every CSV (leading comment line) and JSON summary.
inline constexpr int kSchemaVersion = 1;

struct CommandContext {
  std::filesystem::path out_dir;  // empty: cfg.output.dir
  std::size_t workers = 1;
  std::ostream* log = nullptr;    // progress lines; nullptr = silent
};

/// Everything one evolve run produces, before it is written anywhere.
struct EvolveOutcome {
  InitialData data;
  RunResult run;
  std::optional<InflationReport> inflation;
  std::optional<C1Envelope> envelope;
  std::string csv;
  std::string summary_json;
  int exit_code = exit_ok;
};

/// Builds the initial data from cfg.construction (or loads cfg.output.field)
/// and runs the evolve pipeline with the configured diagnostics.
EvolveOutcome run_evolve(const RunConfig& cfg);

/// Output file stem: <out_dir>/<name>.<command>
std::filesystem::path output_stem(const RunConfig& cfg, const CommandContext& ctx, const std::string& command);

// Subcommands. Each validates the config, writes its files atomically and
// returns an ExitCode; errors are reported on ctx.log.
int cmd_build(const RunConfig& cfg, const CommandContext& ctx);
int cmd_evolve(const RunConfig& cfg, const CommandContext& ctx);
int cmd_sweep(const RunConfig& cfg, const CommandContext& ctx);
int cmd_glue(const RunConfig& cfg, const CommandContext& ctx);
int cmd_norms(const RunConfig& cfg, const CommandContext& ctx);
int cmd_decay(const RunConfig& cfg, const CommandContext& ctx);
int cmd_loglip(const RunConfig& cfg, const CommandContext& ctx);

/// Dispatch by name ("build", "evolve", ...); unknown names give exit_config.
int run_command(const std::string& name, const RunConfig& cfg, const CommandContext& ctx);
std::vector<std::string> command_names();

}  // namespace eulerinf
