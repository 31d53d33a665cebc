#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlgame/analysis.hpp"
#include "nlgame/cli/config.hpp"
#include "nlgame/oracles.hpp"

namespace nlgame::cli {

enum ExitCode : int { exit_ok = 0, exit_config = 2, exit_blowup = 3, exit_io = 4 };

struct RunOptions {
  std::filesystem::path out_dir = "out";
  unsigned workers = 1;
  std::vector<std::string> notes;              // copied into the manifest
  std::function<void(const std::string&)> log;  // progress lines; may be empty
};

struct PointOutcome {
  std::size_t index = 0;
  double param = 0;
  double tau = 0;
  std::size_t steps = 0;
  bool blowup = false;
  std::string error;  // blowup description
  double initial_lo = 0, initial_hi = 0;
  BandSummary bands;
  std::vector<double> non_central;
  std::optional<BandBoundReport> bounds;  // only for compactly supported rho'
  double stationary_residual = 0;
  std::size_t sup_norm_violations = 0;
  std::size_t envelope_flags = 0;
  std::vector<std::string> warnings;
  std::vector<double> final_values;
};

struct RunOutcome {
  int exit_code = exit_ok;
  std::vector<PointOutcome> points;
  nlohmann::json manifest;
};

/// Runs a single solve (no sweep) or every sweep point, writing
///
///   profiles/pNNN_initial.csv, profiles/pNNN_final.csv, profiles/pNNN_sK.csv
///   bands.json, histogram.csv, manifest.json
///
/// into out_dir. A blowup aborts only its sweep point; for a single solve it
/// sets exit_blowup. Config problems throw ConfigError, file problems IoError.
RunOutcome run(const RunConfig& cfg, const RunOptions& options);

struct ConvergeOptions {
  OracleExample example = OracleExample::unstructured_coord;
  std::vector<Resolution> resolutions;  // empty: (1/25, 1/50), (1/50, 1/100), (1/100, 1/200)
  double T = 1.0;
  double c = 2.0;
  std::optional<double> constant_u0;  // default u0(x) = x on [0, 1]
  std::filesystem::path out_dir = "out";
  unsigned workers = 1;
};

std::vector<Resolution> default_ladder();

/// Writes error_table.csv and converge.json; returns the report.
ConvergenceReport run_converge(const ConvergeOptions& options);

}  // namespace nlgame::cli
