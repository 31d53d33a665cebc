#include "nlgame/nonlocal.hpp"

#include <algorithm>
#include <cmath>

#include "nlgame/errors.hpp"
#include "nlgame/parallel.hpp"

namespace nlgame {

NonlocalContext::NonlocalContext(GridPtr grid, KernelSpec kernel, RecognitionSpec recognition,
                                 unsigned workers)
    : grid_(std::move(grid)),
      kernel_(std::move(kernel)),
      recognition_(std::move(recognition)),
      rows_(kernel_, grid_),
      workers_(std::max(1u, workers)) {
  validate(recognition_);
  compact_ = std::isfinite(recognition_.support_radius()) && recognition_.base_rho_prime(0.0) == 0.0;
}

namespace {

void check_size(const NonlocalContext& ctx, std::size_t n) {
  if (n != ctx.grid().node_count()) throw InvalidArgument("grid function does not live on the context grid");
}

// Insertion sort keyed on (value, index): near-linear when the previous order is
// almost right, and the result is unique whatever order we start from.
void update_order(std::span<const double> w, std::vector<std::size_t>& order) {
  if (order.size() != w.size()) {
    order.resize(w.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  }
  auto less = [&w](std::size_t a, std::size_t b) { return w[a] < w[b] || (w[a] == w[b] && a < b); };
  for (std::size_t i = 1; i < order.size(); ++i) {
    const std::size_t key = order[i];
    std::size_t j = i;
    while (j > 0 && less(key, order[j - 1])) {
      order[j] = order[j - 1];
      --j;
    }
    order[j] = key;
  }
}

}  // namespace

void apply_nonlocality_dense(const NonlocalContext& ctx, std::span<const double> w, std::span<double> out) {
  check_size(ctx, w.size());
  const Grid& g = ctx.grid();
  std::vector<double> scratch;
  with_rho_prime(ctx.recognition(), [&](auto rp) {
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      const auto row = ctx.rows().row(i, scratch);
      const double wi = w[i];
      double acc = 0.0;
      for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * rp(wi - w[g.quad_to_node(j)]);
      out[i] = acc * g.weight();
    }
  });
}

void apply_nonlocality(const NonlocalContext& ctx, std::span<const double> w, std::span<double> out,
                       NonlocalWorkspace* workspace) {
  check_size(ctx, w.size());
  if (out.size() != w.size()) throw InvalidArgument("output span has the wrong length");
  const Grid& g = ctx.grid();
  const std::size_t n = g.node_count();

  if (!ctx.compact_support()) {
    with_rho_prime(ctx.recognition(), [&](auto rp) {
      parallel_for(n, ctx.workers(), [&](std::size_t begin, std::size_t end) {
        std::vector<double> scratch;
        for (std::size_t i = begin; i < end; ++i) {
          const auto row = ctx.rows().row(i, scratch);
          const double wi = w[i];
          double acc = 0.0;
          for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * rp(wi - w[g.quad_to_node(j)]);
          out[i] = acc * g.weight();
        }
      });
    });
    return;
  }

  NonlocalWorkspace local;
  NonlocalWorkspace& ws = workspace ? *workspace : local;
  update_order(w, ws.order);
  std::vector<double> sorted(n);
  for (std::size_t k = 0; k < n; ++k) sorted[k] = w[ws.order[k]];
  // Slightly widened so rounding in wi - a can never drop a nonzero term.
  const double a = ctx.recognition().support_radius() * (1.0 + 1e-9);

  with_rho_prime(ctx.recognition(), [&](auto rp) {
    parallel_for(n, ctx.workers(), [&](std::size_t begin, std::size_t end) {
      std::vector<double> scratch;
      std::vector<std::size_t> candidates;
      for (std::size_t i = begin; i < end; ++i) {
        const double wi = w[i];
        // Every quad node outside (wi - a, wi + a), or with w equal to wi,
        // contributes an exact zero.
        const auto lo = std::lower_bound(sorted.begin(), sorted.end(), wi - a);
        const auto hi = std::upper_bound(lo, sorted.end(), wi + a);
        candidates.clear();
        for (auto it = lo; it != hi; ++it) {
          const std::size_t node = ws.order[static_cast<std::size_t>(it - sorted.begin())];
          if (w[node] == wi) continue;
          const std::size_t q = g.node_to_quad(node);
          if (q != Grid::npos) candidates.push_back(q);
        }
        if (candidates.empty()) {
          out[i] = 0.0;
          continue;
        }
        std::sort(candidates.begin(), candidates.end());
        const auto row = ctx.rows().row(i, scratch);
        double acc = 0.0;
        for (std::size_t q : candidates) acc += row[q] * rp(wi - w[g.quad_to_node(q)]);
        out[i] = acc * g.weight();
      }
    });
  });
}

GridFunction apply_nonlocality(const NonlocalContext& ctx, const GridFunction& w) {
  if (w.grid_ptr() != ctx.grid_ptr() && !(w.grid().domain() == ctx.grid().domain() &&
                                          w.grid().h() == ctx.grid().h()))
    throw InvalidArgument("grid function lives on a different grid");
  std::vector<double> out(w.size());
  apply_nonlocality(ctx, w.values(), out);
  return GridFunction(w.grid_ptr(), std::move(out), w.time());
}

namespace {

double payoff_at(const NonlocalContext& ctx, std::span<const double> w, std::size_t node,
                 std::vector<double>& scratch) {
  const Grid& g = ctx.grid();
  const auto row = ctx.rows().row(node, scratch);
  const RecognitionSpec& rec = ctx.recognition();
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * rho(rec, w[node] - w[g.quad_to_node(j)]);
  return acc * g.weight();
}

}  // namespace

double payoff(const NonlocalContext& ctx, const GridFunction& w, std::size_t node) {
  check_size(ctx, w.size());
  if (node >= w.size()) throw InvalidArgument("payoff: node index out of range");
  std::vector<double> scratch;
  return payoff_at(ctx, w.values(), node, scratch);
}

double stationary_residual(const NonlocalContext& ctx, const GridFunction& w) {
  check_size(ctx, w.size());
  std::vector<double> g(w.size());
  apply_nonlocality(ctx, w.values(), g);
  double m = 0.0;
  for (double v : g) m = std::max(m, std::abs(v));
  return m;
}

double nash_residual(const NonlocalContext& ctx, const GridFunction& w, std::span<const double> shifts) {
  check_size(ctx, w.size());
  if (shifts.empty() || std::find(shifts.begin(), shifts.end(), 0.0) == shifts.end())
    throw InvalidArgument("nash_residual: shift grid must be nonempty and contain 0");
  const Grid& g = ctx.grid();
  const RecognitionSpec& rec = ctx.recognition();
  const std::size_t n = g.node_count();
  std::vector<double> best(n, 0.0);
  parallel_for(n, ctx.workers(), [&](std::size_t begin, std::size_t end) {
    std::vector<double> scratch;
    for (std::size_t i = begin; i < end; ++i) {
      const double base = payoff_at(ctx, w.values(), i, scratch);
      const auto row = ctx.rows().row(i, scratch);
      double local = 0.0;
      for (double s : shifts) {
        const double moved = w[i] + s;
        double acc = 0.0;
        for (std::size_t j = 0; j < row.size(); ++j) {
          const std::size_t y = g.quad_to_node(j);
          const double wy = y == i ? moved : w[y];
          acc += row[j] * rho(rec, moved - wy);
        }
        local = std::min(local, base - acc * g.weight());
      }
      best[i] = local;
    }
  });
  return *std::min_element(best.begin(), best.end());
}

std::vector<double> default_shift_grid(const GridFunction& w) {
  double r = w.sup_norm();
  if (r == 0.0) r = 1.0;
  std::vector<double> shifts(81);
  for (int k = 0; k < 81; ++k) shifts[static_cast<std::size_t>(k)] = 2.0 * r * static_cast<double>(k - 40) / 40.0;
  return shifts;
}

}  // namespace nlgame
