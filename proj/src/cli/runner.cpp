#include "nlgame/cli/runner.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "nlgame/cli/output.hpp"
#include "nlgame/errors.hpp"
#include "nlgame/format.hpp"
#include "nlgame/nonlocal.hpp"
#include "nlgame/solver.hpp"

namespace nlgame::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string point_stem(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "p%03zu", index);
  return buf;
}

std::string snapshot_name(std::size_t index, std::size_t k) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "p%03zu_s%02zu.csv", index, k);
  return buf;
}

double gap_threshold_for(const RunConfig& cfg, double range) {
  if (cfg.gap_threshold) return *cfg.gap_threshold;
  const double a = cfg.recognition.support_radius();
  if (std::isfinite(a)) return 0.5 * a;
  // No band scale: only values equal up to round-off share a band.
  return 1e-6 * std::max(1.0, range);
}

void make_dirs(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
}

void write_profile(const fs::path& path, double param, const GridFunction& w) {
  write_text(path, profile_csv_header(w.grid().dimension()) + profile_csv_rows(param, w));
}

struct PointFiles {
  std::string initial, final;
  std::vector<std::pair<double, std::string>> snapshots;  // actual time, file
};

}  // namespace

RunOutcome run(const RunConfig& cfg, const RunOptions& options) {
  validate(cfg);
  auto grid = Grid::build(cfg.domain, cfg.h);
  if (cfg.kernel.lower_bound() && !check_lower_bound(cfg.kernel, grid))
    throw ConfigError("kernel.lower_bound", "kernel falls below its declared lower bound on this grid");

  const bool is_sweep = cfg.sweep.has_value();
  const std::vector<double> params = is_sweep ? cfg.sweep->values : std::vector<double>{0.0};
  const std::size_t n_points = params.size();
  const unsigned workers = std::max(1u, options.workers);
  const unsigned outer = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n_points)));
  const unsigned inner = std::max(1u, workers / outer);

  const fs::path profile_dir = options.out_dir / "profiles";
  make_dirs(profile_dir);

  std::vector<PointOutcome> points(n_points);
  std::vector<PointFiles> files(n_points);
  std::vector<std::exception_ptr> failures(n_points);
  std::atomic<std::size_t> next{0};
  std::mutex log_mutex;
  const SolveOptions solve_options{cfg.safety, cfg.memory_cap_bytes, inner};

  auto work = [&] {
    for (std::size_t i = next++; i < n_points; i = next++) {
      try {
        const RunConfig pc = at_point(cfg, params[i]);
        NonlocalContext ctx(grid, pc.kernel, pc.recognition, inner);
        const GridFunction u0 = sample(grid, make_initial(pc.initial));
        Forcing forcing;
        if (pc.forcing)
          forcing = [c = *pc.forcing](double, std::span<const double>, double) { return c; };
        const SolveResult res = solve(ctx, u0, pc.T, pc.tau, pc.snapshots, forcing, solve_options);

        PointOutcome& out = points[i];
        out.index = i;
        out.param = params[i];
        out.tau = res.tau;
        out.steps = res.steps;
        out.blowup = res.blowup;
        out.warnings = res.warnings;
        out.sup_norm_violations = res.count(MonitorKind::sup_norm_increase);
        out.envelope_flags = res.count(MonitorKind::lipschitz_envelope);
        out.initial_lo = u0.min();
        out.initial_hi = u0.max();
        if (res.blowup) {
          out.error = "non-finite value at node " + std::to_string(res.blowup_node) + " in step " +
                      std::to_string(res.blowup_step);
        }

        const GridFunction& fin = res.final();
        out.final_values.assign(fin.values().begin(), fin.values().end());
        PointFiles& pf = files[i];
        const std::string stem = point_stem(i);
        pf.initial = "profiles/" + stem + "_initial.csv";
        pf.final = "profiles/" + stem + "_final.csv";
        write_profile(options.out_dir / pf.initial, params[i], u0);
        write_profile(options.out_dir / pf.final, params[i], fin);
        for (std::size_t k = 0; k < pc.snapshots.size(); ++k) {
          const double want = pc.snapshots[k];
          const GridFunction* best = &res.snapshots.front();
          for (const auto& s : res.snapshots)
            if (std::abs(s.time() - want) < std::abs(best->time() - want)) best = &s;
          const std::string name = "profiles/" + snapshot_name(i, k);
          write_profile(options.out_dir / name, params[i], *best);
          pf.snapshots.emplace_back(best->time(), name);
        }

        if (!res.blowup) {
          const double range = out.initial_hi - out.initial_lo;
          out.bands = detect_bands(fin.values(), gap_threshold_for(pc, range));
          out.non_central = non_central_separations(out.bands, out.initial_lo, out.initial_hi);
          const double a = pc.recognition.support_radius();
          if (std::isfinite(a)) out.bounds = check_band_bounds(out.bands, range, a);
          out.stationary_residual = stationary_residual(ctx, fin);
        }

        if (options.log) {
          std::string line = (is_sweep ? "point " + std::to_string(i + 1) + "/" + std::to_string(n_points) +
                                             " " + to_string(cfg.sweep->parameter) + "=" + fmt_double(params[i])
                                       : std::string("solve")) +
                             " tau=" + fmt_double(res.tau) + " steps=" + std::to_string(res.steps);
          line += res.blowup ? " BLOWUP" : " bands=" + std::to_string(out.bands.count());
          std::lock_guard lock(log_mutex);
          options.log(line);
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (unsigned t = 1; t < outer; ++t) pool.emplace_back(work);
    work();
  }
  for (auto& f : failures) {
    if (!f) continue;
    try {
      std::rethrow_exception(f);
    } catch (const ConfigError&) {
      throw;
    } catch (const IoError&) {
      throw;
    } catch (const InvalidArgument& e) {
      throw ConfigError("", e.what());
    }
  }

  // Single writer from here on.
  RunOutcome outcome;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& p : points) {
    lo = std::min(lo, p.initial_lo);
    hi = std::max(hi, p.initial_hi);
    if (p.blowup) continue;
    for (double v : p.final_values) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }

  std::string hist_csv = histogram_csv_header();
  json bands_json = json::array();
  json point_json = json::array();
  bool any_blowup = false;
  for (std::size_t i = 0; i < n_points; ++i) {
    const PointOutcome& p = points[i];
    json b;
    b["index"] = i;
    b["param_value"] = p.param;
    json pj;
    pj["index"] = i;
    pj["param_value"] = p.param;
    pj["initial_formula"] = initial_formula(at_point(cfg, p.param).initial);
    pj["tau"] = p.tau;
    pj["steps"] = p.steps;
    pj["status"] = p.blowup ? "blowup" : "ok";
    if (p.blowup) {
      any_blowup = true;
      pj["error"] = p.error;
      b["status"] = "blowup";
    } else {
      hist_csv += histogram_csv_rows(p.param, density_histogram(p.final_values, cfg.histogram_bins, lo, hi));
      b["status"] = "ok";
      b["bands"] = to_json(p.bands);
      b["initial_range"] = {p.initial_lo, p.initial_hi};
      b["non_central_separations"] = p.non_central;
      b["stationary_residual"] = p.stationary_residual;
      if (p.bounds) {
        b["bound_floor_R_over_r_plus_1"] = p.bounds->theorem_bound;
        b["bound_R_over_2r_plus_1"] = p.bounds->empirical_bound;
        b["within_floor_bound"] = p.bounds->theorem_bound_ok;
        b["within_half_bound"] = p.bounds->empirical_bound_ok;
        b["min_separation_at_least_r"] = p.bounds->min_separation_ok;
      }
    }
    pj["monitors"] = {{"sup_norm_increase", p.sup_norm_violations}, {"lipschitz_envelope", p.envelope_flags}};
    pj["warnings"] = p.warnings;
    json snaps = json::array();
    for (std::size_t k = 0; k < files[i].snapshots.size(); ++k)
      snaps.push_back({{"requested_time", cfg.snapshots[k]},
                       {"time", files[i].snapshots[k].first},
                       {"file", files[i].snapshots[k].second}});
    pj["files"] = {{"initial", files[i].initial}, {"final", files[i].final}, {"snapshots", snaps}};
    point_json.push_back(pj);
    bands_json.push_back(b);
  }
  write_text(options.out_dir / "histogram.csv", hist_csv);
  write_json(options.out_dir / "bands.json", bands_json);

  json m;
  m["manifest_version"] = 1;
  m["tool"] = "nlgame";
  json resolved_cfg = to_json(cfg);
  resolved_cfg["h"] = grid->h();
  m["config"] = resolved_cfg;
  m["resolved"] = {
      {"h", grid->h()},
      {"requested_h", grid->requested_h()},
      {"h_snapped", grid->snapped()},
      {"axis_nodes", grid->axis_counts()},
      {"tau_mode", cfg.tau ? "fixed" : "auto"},
      {"safety", cfg.safety},
      {"T", cfg.T},
      {"initial_formula", initial_formula(cfg.initial)},
      {"sweep_parameter", cfg.sweep ? json(to_string(cfg.sweep->parameter)) : json(nullptr)},
      {"histogram_range", {lo, hi}},
      {"histogram_bins", cfg.histogram_bins},
  };
  json warnings = json::array();
  if (grid->snapped())
    warnings.push_back("h=" + fmt_double(grid->requested_h()) + " does not divide the domain; using h=" +
                       fmt_double(grid->h()));
  for (const auto& p : points)
    for (const auto& w : p.warnings) warnings.push_back(point_stem(p.index) + ": " + w);
  m["warnings"] = warnings;
  m["notes"] = options.notes;
  m["points"] = point_json;
  m["files"] = {{"bands", "bands.json"}, {"histogram", "histogram.csv"}};
  write_json(options.out_dir / "manifest.json", m);

  outcome.points = std::move(points);
  outcome.manifest = std::move(m);
  outcome.exit_code = (!is_sweep && any_blowup) ? exit_blowup : exit_ok;
  return outcome;
}

std::vector<Resolution> default_ladder() {
  return {{1.0 / 25.0, 1.0 / 50.0}, {1.0 / 50.0, 1.0 / 100.0}, {1.0 / 100.0, 1.0 / 200.0}};
}

ConvergenceReport run_converge(const ConvergeOptions& options) {
  const Domain domain = Domain::interval(0.0, 1.0);
  ScalarField u0 = [](std::span<const double> x) { return x[0]; };
  if (options.constant_u0) u0 = [v = *options.constant_u0](std::span<const double>) { return v; };
  const std::vector<Resolution> ladder = options.resolutions.empty() ? default_ladder() : options.resolutions;
  const OracleSpec spec(options.example, domain, u0, options.c);
  ConvergenceReport report = convergence_study(spec, ladder, options.T, options.workers);

  make_dirs(options.out_dir);
  write_text(options.out_dir / "error_table.csv", error_table_csv(report));
  json j;
  j["example"] = to_string(options.example);
  j["domain"] = {{"lower", domain.lower()}, {"upper", domain.upper()}};
  j["initial"] = options.constant_u0 ? "u0(x) = " + fmt_double(*options.constant_u0) : std::string("u0(x) = x");
  j["c"] = options.c;
  j["T"] = options.T;
  j["mean_u0"] = spec.mean();
  j["mean_cells"] = spec.mean_cells();
  json rows = json::array();
  for (const auto& r : report.rows) rows.push_back({{"h", r.h}, {"tau", r.tau}, {"sup_error", r.sup_error}});
  j["rows"] = rows;
  j["status"] = to_string(report.status);
  j["order"] = report.status == OrderStatus::fitted ? json(report.order) : json(nullptr);
  j["excluded_coarsest"] = report.excluded_coarsest;
  write_json(options.out_dir / "converge.json", j);
  return report;
}

}  // namespace nlgame::cli
