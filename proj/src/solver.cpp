#include "nlgame/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlgame/analysis.hpp"
#include "nlgame/errors.hpp"
#include "nlgame/parallel.hpp"

namespace nlgame {

namespace {

constexpr double kSupTolerance = 1e-12;

double effective_row_bound(const NonlocalContext& ctx) {
  return std::max(ctx.rows().max_entry(), max_discrete_l1(ctx.kernel(), ctx.grid_ptr()));
}

// One update in place: next = w + tau G + tau f. Returns the first bad node or npos.
std::size_t advance(const NonlocalContext& ctx, std::span<const double> w, std::span<double> g,
                    std::span<double> next, double tau, double t, const Forcing& forcing,
                    NonlocalWorkspace* ws) {
  apply_nonlocality(ctx, w, g, ws);
  const Grid& grid = ctx.grid();
  std::size_t bad = Grid::npos;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double v = w[i] + tau * g[i];
    if (forcing) v += tau * forcing(w[i], grid.node(i), t);
    next[i] = v;
    if (!std::isfinite(v) && bad == Grid::npos) bad = i;
  }
  return bad;
}

}  // namespace

double stable_tau(const NonlocalContext& ctx, const GridFunction& u0, double safety, double unconstrained) {
  if (!(safety > 0.0 && safety <= 1.0)) throw InvalidArgument("stable_tau: safety must lie in (0, 1]");
  if (!is_coordination(ctx.recognition()))
    throw InvalidArgument("stable_tau: recognition function is not a coordination game; supply tau explicitly");
  const double r = u0.sup_norm();
  const double lip = lipschitz_bound(ctx.recognition(), -2.0 * r, 2.0 * r);
  const double d = effective_row_bound(ctx);
  if (lip * d == 0.0) return safety * unconstrained;
  return safety / (lip * d);
}

GridFunction step(const NonlocalContext& ctx, const GridFunction& w, double tau, const Forcing& forcing) {
  if (!(tau > 0.0)) throw InvalidArgument("step: tau must be positive");
  std::vector<double> g(w.size()), next(w.size());
  const std::size_t bad = advance(ctx, w.values(), g, next, tau, w.time(), forcing, nullptr);
  if (bad != Grid::npos) {
    std::ostringstream os;
    os << "non-finite value at node " << bad << " stepping from t=" << w.time();
    throw BlowupError(bad, w.time(), os.str());
  }
  return GridFunction(w.grid_ptr(), std::move(next), w.time() + tau);
}

SolveResult solve(const NonlocalContext& ctx, const GridFunction& u0, double horizon,
                  std::optional<double> tau_opt, std::span<const double> snapshot_times,
                  const Forcing& forcing, const SolveOptions& options) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) throw InvalidArgument("solve: horizon must be >= 0");
  for (double t : snapshot_times)
    if (!(t >= 0.0 && t <= horizon)) throw InvalidArgument("solve: snapshot times must lie in [0, T]");

  SolveResult result;
  const bool coordination = is_coordination(ctx.recognition());
  if (tau_opt) {
    if (!(*tau_opt > 0.0)) throw InvalidArgument("solve: tau must be positive");
    result.tau = *tau_opt;
    if (coordination) {
      const double bound = stable_tau(ctx, u0, 1.0, std::numeric_limits<double>::infinity());
      if (result.tau > bound) {
        std::ostringstream os;
        os.precision(17);
        os << "tau " << result.tau << " exceeds the maximum-principle bound " << bound;
        result.warnings.push_back(os.str());
      }
    }
  } else {
    result.tau = stable_tau(ctx, u0, options.safety, horizon > 0.0 ? horizon : 1.0);
  }
  const double tau = result.tau;

  // Time levels: k tau for k < n, and the horizon itself.
  std::size_t n = 0;
  if (horizon > 0.0) {
    n = static_cast<std::size_t>(std::floor(horizon / tau));
    if (static_cast<double>(n) * tau < horizon * (1.0 - 1e-12)) ++n;
    n = std::max<std::size_t>(n, 1);
  }
  auto level_time = [&](std::size_t k) { return k == n ? horizon : static_cast<double>(k) * tau; };

  std::vector<std::size_t> snap_levels{0, n};
  for (double t : snapshot_times) {
    auto k = static_cast<std::size_t>(std::llround(t / tau));
    k = std::min(k, n);
    // The last interval may be short; pick the truly nearest level.
    if (k + 1 <= n && std::abs(level_time(k + 1) - t) < std::abs(level_time(k) - t)) ++k;
    if (k > 0 && std::abs(level_time(k - 1) - t) < std::abs(level_time(k) - t)) --k;
    snap_levels.push_back(k);
  }
  std::sort(snap_levels.begin(), snap_levels.end());
  snap_levels.erase(std::unique(snap_levels.begin(), snap_levels.end()), snap_levels.end());

  const std::size_t payload = snap_levels.size() * u0.size() * sizeof(double);
  if (payload > options.memory_cap_bytes)
    throw InvalidArgument("solve: snapshot payload of " + std::to_string(payload) +
                          " bytes exceeds the memory cap");

  // Regularity envelope (L0 + C t) e^{c t}; only meaningful for coordination games.
  const Grid& grid = ctx.grid();
  const double r0 = u0.sup_norm();
  const double lip0 = lipschitz_estimate(grid, u0.values());
  const double row_l1 = max_discrete_l1(ctx.kernel(), ctx.grid_ptr());
  const double env_C = sup_bound(ctx.recognition(), -2.0 * r0, 2.0 * r0) *
                       kernel_l1_lipschitz(ctx.kernel(), grid.dimension());
  const double env_c = lipschitz_bound(ctx.recognition(), -2.0 * r0, 2.0 * r0) * row_l1;
  const bool check_envelope = coordination && !forcing && grid.node_count() > 1;
  const bool check_sup = coordination && !forcing;

  std::vector<double> w(u0.values().begin(), u0.values().end());
  std::vector<double> g(w.size()), next(w.size());
  NonlocalWorkspace ws;

  auto take_snapshot = [&](double t) {
    result.snapshots.emplace_back(u0.grid_ptr(), w, t);
    result.lipschitz_series.push_back(lipschitz_estimate(grid, w));
  };

  result.sup_norm_series.reserve(n + 1);
  result.sup_norm_series.push_back(r0);
  std::size_t next_snap = 0;
  if (snap_levels[next_snap] == 0) {
    take_snapshot(0.0);
    ++next_snap;
  }
  double sup_prev = r0;
  for (std::size_t k = 0; k < n; ++k) {
    const double t = level_time(k);
    const double dt = level_time(k + 1) - t;
    const std::size_t bad = advance(ctx, w, g, next, dt, t, forcing, &ws);
    if (bad != Grid::npos) {
      result.blowup = true;
      result.blowup_step = k + 1;
      result.blowup_node = bad;
      result.monitor_flags.push_back({k + 1, MonitorKind::non_finite, static_cast<double>(bad)});
      if (result.snapshots.empty() || result.snapshots.back().time() != t) take_snapshot(t);
      result.steps = k;
      return result;
    }
    w.swap(next);
    double sup = 0.0;
    for (double v : w) sup = std::max(sup, std::abs(v));
    result.sup_norm_series.push_back(sup);
    if (check_sup && sup > sup_prev + kSupTolerance)
      result.monitor_flags.push_back({k + 1, MonitorKind::sup_norm_increase, sup - sup_prev});
    sup_prev = sup;
    const double t_next = level_time(k + 1);
    if (check_envelope) {
      const double est = lipschitz_estimate(grid, w);
      const double envelope = (lip0 + env_C * t_next) * std::exp(env_c * t_next);
      if (est > envelope * (1.0 + 1e-9))
        result.monitor_flags.push_back({k + 1, MonitorKind::lipschitz_envelope, est});
    }
    if (next_snap < snap_levels.size() && snap_levels[next_snap] == k + 1) {
      take_snapshot(t_next);
      ++next_snap;
    }
  }
  result.steps = n;
  return result;
}

SolveResult solve(const ProblemSpec& spec, const SolveOptions& options) {
  if (!(spec.horizon >= 0.0)) throw InvalidArgument("problem horizon must be nonnegative");
  if (!spec.initial) throw InvalidArgument("problem needs an initial condition");
  auto grid = Grid::build(spec.domain, spec.h);
  NonlocalContext ctx(grid, spec.kernel, spec.recognition, options.workers);
  const GridFunction u0 = sample(grid, spec.initial);
  return solve(ctx, u0, spec.horizon, spec.tau, spec.snapshot_times, spec.forcing, options);
}

}  // namespace nlgame
