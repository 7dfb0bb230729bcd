#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "core/model_params.hpp"

namespace lvbif {

struct RunConfig {
  Params params{16.0, 16.0, 2.0, 1.0, 2};
  int grid = 512;
  int modes = 4;
  int j = 1;
  double beta_max = 0.0;  // absolute; 0 means 1e3 * beta_j
  int max_points = 500;
  double amplitude = 1e-2;
  std::uint64_t seed = 20240607;
  int workers = 0;  // 0 means hardware concurrency
  int draws = 1000;
  int betas_per_draw = 100;
  std::string out = "out";
};

nlohmann::json params_json(const Params& p);

/// Reads a configuration object; unknown keys are rejected, parameters are validated.
/// Throws ValidationError naming the offending key or violated inequality.
RunConfig parse_run_config(const nlohmann::json& j, RunConfig base = {});
nlohmann::json config_json(const RunConfig& cfg);

// Result of a command: machine summary plus the exit status the CLI should use.
struct CommandResult {
  nlohmann::json summary;
  int exit_code = 0;
};

/// eigen | points | branch | limit | verify | report. Writes files under cfg.out.
/// Throws ValidationError for an unknown command and IoError for file failures.
CommandResult run_command(const std::string& name, const RunConfig& cfg);

}  // namespace lvbif
