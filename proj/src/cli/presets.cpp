#include "nlgame/cli/presets.hpp"

#include "nlgame/errors.hpp"

namespace nlgame::cli {

namespace {

// Shared by the three band experiments: gaussian kernel s = 0.5, bump rho with
// r = 0.2 on [-1/2, 1/2], reported at t = 20.
RunConfig band_experiment(const std::string& name) {
  RunConfig cfg;
  cfg.name = name;
  cfg.domain = Domain::interval(-0.5, 0.5);
  cfg.h = 1.0 / 200.0;
  cfg.T = 20.0;
  cfg.kernel = KernelSpec::gaussian(0.5);
  cfg.recognition = RecognitionSpec::bump(0.2);
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() { return {"exp1", "exp2", "exp3", "propagation"}; }

RunConfig preset(const std::string& name) {
  if (name == "exp1") {
    RunConfig cfg = band_experiment(name);
    cfg.initial = {InitialType::linear, 1.0, 0.0};
    cfg.sweep = SweepSpec{SweepParameter::initial_slope, linspace(0.0, 4.0, 81)};
    return cfg;
  }
  if (name == "exp2") {
    RunConfig cfg = band_experiment(name);
    cfg.initial.type = InitialType::logistic;
    cfg.sweep = SweepSpec{SweepParameter::sigmoid_parameter, linspace(0.0, 15.0, 76)};
    return cfg;
  }
  if (name == "exp3") {
    RunConfig cfg = band_experiment(name);
    cfg.initial = {InitialType::linear, 2.0, 0.0};
    cfg.sweep = SweepSpec{SweepParameter::support_radius, linspace(0.01, 0.8, 81)};
    return cfg;
  }
  if (name == "propagation") {
    RunConfig cfg = band_experiment(name);
    cfg.domain = Domain::interval(-2.0, 2.0);
    cfg.initial = {InitialType::linear, 3.5, 0.0};
    cfg.snapshots = {5.0, 10.0, 15.0, 20.0};
    return cfg;
  }
  throw ConfigError("preset", "unknown preset '" + name + "'");
}

std::vector<std::string> preset_notes(const std::string& name) {
  if (name == "exp2")
    return {"initial data is the logistic 1/(1+exp(-l*x)); the printed form (1+exp(-l*x)) has range (1,2), "
            "but the data is described as confined to (0,1), which only the logistic satisfies"};
  if (name == "exp3")
    return {"initial data u0 = 2x (range 2); r = 0 is excluded, the grid starts at r = 0.01"};
  if (name == "propagation")
    return {"snapshot times are evenly spaced: T/4, T/2, 3T/4, T"};
  return {};
}

}  // namespace nlgame::cli
