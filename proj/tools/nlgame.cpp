// nlgame: run experiment presets, config files, or convergence studies.
//
//   nlgame --preset exp1 --workers 4 --out runs/exp1
//   nlgame --config run.json --tau 0.001
//   nlgame --converge unstructured_coord --resolutions 0.04:0.02,0.02:0.01,0.01:0.005

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "nlgame/cli/config.hpp"
#include "nlgame/cli/presets.hpp"
#include "nlgame/cli/runner.hpp"
#include "nlgame/errors.hpp"
#include "nlgame/format.hpp"

using namespace nlgame;
using namespace nlgame::cli;

namespace {

std::vector<double> parse_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError(flag, "not a number: '" + item + "'");
    }
  }
  return out;
}

std::vector<Resolution> parse_resolutions(const std::string& text) {
  std::vector<Resolution> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw ConfigError("--resolutions", "expected h:tau pairs, got '" + item + "'");
    const auto h = parse_list(item.substr(0, colon), "--resolutions");
    const auto tau = parse_list(item.substr(colon + 1), "--resolutions");
    if (h.size() != 1 || tau.size() != 1) throw ConfigError("--resolutions", "bad pair '" + item + "'");
    out.push_back({h[0], tau[0]});
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonlocal game dynamics solver"};
  app.set_help_flag("--help", "print this help");
  std::string preset_name, config_path, converge_name, resolutions_text, snapshots_text, values_text;
  std::string tau_text, u0_text;
  std::optional<double> h, T, c;
  unsigned workers = 1;
  std::string out_dir = "out";
  bool quiet = false;

  auto* g_preset = app.add_option("--preset", preset_name, "exp1 | exp2 | exp3 | propagation");
  auto* g_config = app.add_option("--config", config_path, "JSON config (or a previous manifest.json)");
  auto* g_conv = app.add_option("--converge", converge_name,
                                "unstructured_coord | unstructured_anticoord | dis_coordination | coord_advect");
  g_preset->excludes(g_config)->excludes(g_conv);
  g_config->excludes(g_conv);
  app.add_option("--h", h, "grid spacing");
  app.add_option("--tau", tau_text, "time step, or auto");
  app.add_option("--T", T, "final time");
  app.add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--snapshots", snapshots_text, "snapshot times t1,t2,...");
  app.add_option("--values", values_text, "override the sweep grid v1,v2,...");
  app.add_option("--resolutions", resolutions_text, "convergence ladder h1:tau1,h2:tau2,...");
  app.add_option("--c", c, "oracle parameter c (dis_coordination, coord_advect)");
  app.add_option("--u0", u0_text, "convergence initial data: x (default) or a constant");
  app.add_flag("--quiet", quiet, "no progress lines");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_config;
  }

  try {
    if (!converge_name.empty()) {
      ConvergeOptions opt;
      opt.example = parse_oracle_example(converge_name);
      if (!resolutions_text.empty()) opt.resolutions = parse_resolutions(resolutions_text);
      if (T) opt.T = *T;
      if (c) opt.c = *c;
      if (!u0_text.empty() && u0_text != "x") {
        const auto v = parse_list(u0_text, "--u0");
        if (v.size() != 1) throw ConfigError("--u0", "expected x or a single number");
        opt.constant_u0 = v[0];
      }
      opt.out_dir = out_dir;
      opt.workers = workers;
      const ConvergenceReport rep = run_converge(opt);
      std::cout << "h,tau,sup_error\n";
      for (const auto& r : rep.rows)
        std::cout << fmt_double(r.h) << "," << fmt_double(r.tau) << "," << fmt_double(r.sup_error) << "\n";
      std::cout << "order: "
                << (rep.status == OrderStatus::fitted ? fmt_double(rep.order) : std::string(to_string(rep.status)))
                << (rep.excluded_coarsest ? " (coarsest level excluded)" : "") << "\n";
      return exit_ok;
    }

    RunConfig cfg;
    std::vector<std::string> notes;
    if (!preset_name.empty()) {
      cfg = preset(preset_name);
      notes = preset_notes(preset_name);
    } else if (!config_path.empty()) {
      cfg = load_config(config_path);
    } else {
      std::cerr << "nothing to do: give --preset, --config or --converge\n" << app.help();
      return exit_config;
    }

    if (h) cfg.h = *h;
    if (!tau_text.empty()) {
      if (tau_text == "auto") {
        cfg.tau.reset();
      } else {
        const auto v = parse_list(tau_text, "--tau");
        if (v.size() != 1) throw ConfigError("--tau", "expected auto or a number");
        cfg.tau = v[0];
      }
    }
    if (T) {
      // Preset slice times follow the horizon unless given explicitly.
      if (preset_name == "propagation" && snapshots_text.empty())
        cfg.snapshots = {*T / 4, *T / 2, 3 * *T / 4, *T};
      cfg.T = *T;
    }
    if (!snapshots_text.empty()) cfg.snapshots = parse_list(snapshots_text, "--snapshots");
    if (!values_text.empty()) {
      if (!cfg.sweep) throw ConfigError("--values", "the run has no sweep");
      cfg.sweep->values = parse_list(values_text, "--values");
    }
    validate(cfg);

    RunOptions opt;
    opt.out_dir = out_dir;
    opt.workers = workers;
    opt.notes = notes;
    if (!quiet) opt.log = [](const std::string& line) { std::cerr << line << "\n"; };
    const RunOutcome outcome = run(cfg, opt);
    if (outcome.exit_code == exit_blowup) std::cerr << "solver blew up; see " << out_dir << "/manifest.json\n";
    return outcome.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const IoError& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return exit_io;
  } catch (const BlowupError& e) {
    std::cerr << "blowup: " << e.what() << "\n";
    return exit_blowup;
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return exit_config;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
