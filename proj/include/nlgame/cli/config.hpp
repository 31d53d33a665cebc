#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlgame/core.hpp"
#include "nlgame/kernels.hpp"
#include "nlgame/recognition.hpp"

namespace nlgame::cli {

enum class SweepParameter { initial_slope, sigmoid_parameter, support_radius };
const char* to_string(SweepParameter p);

enum class InitialType { linear, logistic, constant };
const char* to_string(InitialType t);

// All initial profiles depend on the first coordinate only.
struct InitialSpec {
  InitialType type = InitialType::linear;
  double slope = 1.0;   // linear: slope * x + offset
  double offset = 0.0;
  double l = 1.0;       // logistic: 1 / (1 + exp(-l x))
  double value = 0.0;   // constant
};

ScalarField make_initial(const InitialSpec& spec);
std::string initial_formula(const InitialSpec& spec);

struct SweepSpec {
  SweepParameter parameter = SweepParameter::initial_slope;
  std::vector<double> values;
};

struct RunConfig {
  std::string name = "run";
  Domain domain = Domain::interval(0.0, 1.0);
  double h = 0.01;
  std::optional<double> tau;  // nullopt = "auto"
  double T = 1.0;
  KernelSpec kernel = KernelSpec::uniform();
  RecognitionSpec recognition = RecognitionSpec::quad_coord();
  InitialSpec initial;
  std::optional<double> forcing;  // constant f(u, x, t) = value
  std::vector<double> snapshots;
  std::optional<SweepSpec> sweep;
  std::size_t histogram_bins = 200;
  std::optional<double> gap_threshold;  // default: half the support radius of rho'
  double safety = 0.5;
  std::size_t memory_cap_bytes = std::size_t{1} << 30;
};

/// Strict parse: unknown fields and type errors throw ConfigError naming the
/// offending field path (e.g. "kernel.s"). Relative table paths resolve
/// against `base_dir`.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});

/// Reads a config file. A manifest written by a previous run is accepted too;
/// its embedded config is used.
RunConfig load_config(const std::filesystem::path& path);

/// Self-contained form accepted by parse_config (table kernels are inlined).
nlohmann::json to_json(const RunConfig& cfg);

/// Cross-field checks (sweep parameter vs template, snapshot range, tau mode).
void validate(const RunConfig& cfg);

/// The config with the swept parameter set to `value`.
RunConfig at_point(const RunConfig& cfg, double value);

/// Values lo + (hi - lo) k / (count - 1), k = 0..count-1.
std::vector<double> linspace(double lo, double hi, std::size_t count);

}  // namespace nlgame::cli
