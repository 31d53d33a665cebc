#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlgame/cli/config.hpp"
#include "nlgame/cli/output.hpp"
#include "nlgame/cli/presets.hpp"
#include "nlgame/cli/runner.hpp"
#include "nlgame/errors.hpp"
#include "nlgame/solver.hpp"

using namespace nlgame;
using namespace nlgame::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("nlgame_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

json minimal() {
  return json::parse(R"({
    "domain": {"lower": 0, "upper": 1},
    "h": 0.05,
    "T": 0.5,
    "initial": {"type": "linear", "slope": 1}
  })");
}

std::string config_error_path(const json& j) {
  try {
    validate(parse_config(j));
  } catch (const ConfigError& e) {
    return e.path();
  }
  return "<none>";
}

std::vector<std::string> csv_files(const fs::path& dir) {
  std::vector<std::string> out;
  for (const auto& e : fs::recursive_directory_iterator(dir))
    if (e.path().extension() == ".csv") out.push_back(fs::relative(e.path(), dir).string());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("minimal config runs") {
  const auto cfg = parse_config(minimal());
  CHECK(cfg.kernel.family() == KernelFamily::uniform);
  CHECK(cfg.recognition.family() == RecognitionFamily::quad_coord);
  CHECK_FALSE(cfg.tau.has_value());
  const auto dir = scratch("minimal");
  const auto out = run(cfg, {dir});
  CHECK(out.exit_code == exit_ok);
  REQUIRE(out.points.size() == 1);
  CHECK(fs::exists(dir / "manifest.json"));
  CHECK(fs::exists(dir / "bands.json"));
  CHECK(fs::exists(dir / "histogram.csv"));
  CHECK(fs::exists(dir / "profiles" / "p000_final.csv"));
  CHECK(out.manifest["resolved"]["tau_mode"] == "auto");
  // G[w] = mean - w here, so each Euler step multiplies the slope by 1 - tau
  const auto& p = out.points[0];
  CHECK(p.tau == doctest::Approx(0.5));
  CHECK(p.final_values.back() - p.final_values.front() ==
        doctest::Approx(std::pow(1 - p.tau, static_cast<double>(p.steps))).epsilon(1e-12));
}

TEST_CASE("config errors name the field") {
  auto j = minimal();
  j["kernel"] = {{"family", "gaussian"}};
  CHECK(config_error_path(j) == "kernel.s");

  j = minimal();
  j["kernel"] = {{"family", "gaussian"}, {"s", 0.5}, {"sigma", 1}};
  CHECK(config_error_path(j) == "kernel.sigma");

  j = minimal();
  j["colour"] = "blue";
  CHECK(config_error_path(j) == "colour");

  j = minimal();
  j.erase("h");
  CHECK(config_error_path(j) == "h");

  j = minimal();
  j["h"] = -0.1;
  CHECK(config_error_path(j) == "h");

  j = minimal();
  j["h"] = "small";
  CHECK(config_error_path(j) == "h");

  j = minimal();
  j["recognition"] = {{"family", "bump"}};
  CHECK(config_error_path(j) == "recognition.r");

  j = minimal();
  j["recognition"] = {{"family", "quad_anticoord"}};
  CHECK(config_error_path(j) == "tau");
  j["tau"] = 0.01;
  CHECK(config_error_path(j) == "<none>");

  j = minimal();
  j["snapshots"] = {0.1, 0.9};
  CHECK(config_error_path(j) == "snapshots[1]");

  j = minimal();
  j["sweep"] = {{"parameter", "support_radius"}, {"values", {0.1}}};
  CHECK(config_error_path(j) == "sweep.parameter");

  j = minimal();
  j["initial"] = {{"type", "cubic"}};
  CHECK(config_error_path(j) == "initial.type");

  CHECK_THROWS_AS(preset("exp9"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/run.json"), Error);
}

TEST_CASE("explicit tau above the stable bound is recorded") {
  auto j = minimal();
  j["tau"] = 2.5;
  j["T"] = 5.0;
  const auto dir = scratch("bigtau");
  const auto out = run(parse_config(j), {dir});
  CHECK(out.manifest["resolved"]["tau_mode"] == "fixed");
  REQUIRE(out.manifest["warnings"].size() >= 1);
  CHECK(out.manifest["points"][0]["warnings"].size() >= 1);
  CHECK(out.manifest["points"][0]["tau"] == 2.5);
}

TEST_CASE("auto tau with a bump stores the stable step") {
  auto j = minimal();
  j["domain"] = {{"lower", -0.5}, {"upper", 0.5}};
  j["h"] = 0.01;
  j["recognition"] = {{"family", "bump"}, {"r", 0.2}};
  j["kernel"] = {{"family", "gaussian"}, {"s", 0.5}};
  j["initial"] = {{"type", "linear"}, {"slope", 2}};
  const auto cfg = parse_config(j);
  const auto dir = scratch("autotau");
  const auto out = run(cfg, {dir});

  auto g = Grid::build(cfg.domain, cfg.h);
  NonlocalContext ctx(g, cfg.kernel, cfg.recognition);
  const double expect = stable_tau(ctx, sample(g, make_initial(cfg.initial)), 0.5);
  CHECK(out.manifest["points"][0]["tau"].get<double>() == doctest::Approx(expect).epsilon(1e-15));
  CHECK(out.manifest["warnings"].empty());
}

TEST_CASE("manifest round trip reproduces the outputs") {
  auto j = minimal();
  j["recognition"] = {{"family", "bump"}, {"r", 0.3}};
  j["kernel"] = {{"family", "table"}, {"offsets", {0, 0.2, 0.5, 1}}, {"values", {1, 0.8, 0.3, 0}}};
  j["h"] = 0.3;  // snaps
  j["snapshots"] = {0.25};
  j["sweep"] = {{"parameter", "initial_slope"}, {"values", {0.5, 3}}};
  const auto a = scratch("rt_a"), b = scratch("rt_b");
  const auto first = run(parse_config(j), {a});
  CHECK(first.manifest["resolved"]["h_snapped"] == true);
  const auto again = load_config(a / "manifest.json");
  const auto second = run(again, {b});
  const auto files = csv_files(a);
  CHECK(files == csv_files(b));
  CHECK(files.size() == 7);
  for (const auto& f : files) CHECK(read_text(a / f) == read_text(b / f));
  CHECK(read_text(a / "bands.json") == read_text(b / "bands.json"));
  CHECK(to_json(again) == to_json(parse_config(first.manifest["config"])));
}

TEST_CASE("worker count does not change any byte") {
  auto cfg = preset("exp1");
  cfg.T = 1.0;
  cfg.sweep->values = {0.0, 1.0, 2.5, 4.0};
  const auto a = scratch("w1"), b = scratch("w3");
  run(cfg, {a, 1});
  run(cfg, {b, 3});
  const auto files = csv_files(a);
  CHECK(files == csv_files(b));
  for (const auto& f : files) CHECK(read_text(a / f) == read_text(b / f));
  CHECK(read_text(a / "bands.json") == read_text(b / "bands.json"));
}

TEST_CASE("exp1 at zero slope is one band at zero") {
  auto cfg = preset("exp1");
  cfg.sweep->values = {0.0};
  const auto dir = scratch("exp1_zero");
  const auto out = run(cfg, {dir});
  REQUIRE(out.points.size() == 1);
  CHECK(out.points[0].bands.count() == 1);
  CHECK(std::abs(out.points[0].bands.centers[0]) <= 1e-12);
  const json bands = json::parse(read_text(dir / "bands.json"));
  CHECK(bands[0]["bands"]["count"] == 1);
}

TEST_CASE("propagation writes one file per slice") {
  auto cfg = preset("propagation");
  CHECK(cfg.snapshots == std::vector<double>{5, 10, 15, 20});
  cfg.T = 2.0;
  cfg.snapshots = {0.5, 1.0, 1.5, 2.0};
  const auto dir = scratch("prop");
  const auto out = run(cfg, {dir});
  CHECK(out.exit_code == exit_ok);
  for (int k = 0; k < 4; ++k) {
    char name[32];
    std::snprintf(name, sizeof name, "p000_s%02d.csv", k);
    CHECK(fs::exists(dir / "profiles" / name));
  }
  CHECK(out.manifest["points"][0]["files"]["snapshots"].size() == 4);
}

TEST_CASE("exp3 at a wide support radius collapses to one band") {
  auto cfg = preset("exp3");
  CHECK(cfg.sweep->values.back() == 0.8);
  cfg.sweep->values = {0.8};
  const auto out = run(cfg, {scratch("exp3_wide")});
  CHECK(out.points[0].bands.count() == 1);
}

TEST_CASE("converge outputs") {
  ConvergeOptions one;
  one.resolutions = {{0.04, 0.02}};
  one.out_dir = scratch("conv1");
  const auto r1 = run_converge(one);
  CHECK(r1.status == OrderStatus::insufficient_data);
  const json j1 = json::parse(read_text(one.out_dir / "converge.json"));
  CHECK(j1["status"] == "insufficient data");
  CHECK(j1["order"].is_null());

  ConvergeOptions flat;
  flat.constant_u0 = 0.3;
  flat.resolutions = {{0.1, 0.1}, {0.05, 0.05}, {0.025, 0.025}};
  flat.out_dir = scratch("conv_flat");
  CHECK(run_converge(flat).status == OrderStatus::exact);

  const std::string table = read_text(one.out_dir / "error_table.csv");
  CHECK(table.rfind("h,tau,sup_error\n", 0) == 0);
  CHECK(table.find('\r') == std::string::npos);
}

TEST_CASE("csv formats") {
  CHECK(profile_csv_header(1) == "param_value,x,u\n");
  CHECK(profile_csv_header(2) == "param_value,x0,x1,u\n");
  auto g = Grid::build(Domain::interval(0, 1), 0.5);
  const auto w = sample(g, [](std::span<const double> x) { return 2 * x[0]; });
  const std::string rows = profile_csv_rows(1.5, w);
  CHECK(std::count(rows.begin(), rows.end(), '\n') == 3);
  CHECK(rows.find('\r') == std::string::npos);
  std::istringstream in(rows);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("1.5,0,0", 0) == 0);

  Histogram h;
  h.bin_centers = {0.25, 0.75};
  h.log2_density = {1.0, -INFINITY};
  h.counts = {2, 0};
  const std::string hr = histogram_csv_rows(3, h);
  CHECK(hr.find("3,0.25,1\n") == 0);
  CHECK(hr.find("-inf") != std::string::npos);

  const auto dir = scratch("csv");
  const auto out = run(parse_config(minimal()), {dir});
  CHECK(read_text(dir / "histogram.csv").rfind(histogram_csv_header(), 0) == 0);
  CHECK(read_text(dir / "profiles" / "p000_final.csv").rfind("param_value,x,u\n", 0) == 0);
  CHECK(json_number(NAN).is_null());
}
