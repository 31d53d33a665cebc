#pragma once

#include <span>
#include <vector>

#include "nlgame/core.hpp"
#include "nlgame/kernels.hpp"
#include "nlgame/recognition.hpp"

namespace nlgame {

/// Grid + kernel rows + recognition function: everything the quadrature
/// G^h[w](x) = sum_{y in quad nodes} K(x, y) rho'(w(x) - w(y)) h^n needs.
class NonlocalContext {
 public:
  NonlocalContext(GridPtr grid, KernelSpec kernel, RecognitionSpec recognition, unsigned workers = 1);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  const RecognitionSpec& recognition() const noexcept { return recognition_; }
  const KernelRows& rows() const noexcept { return rows_; }
  unsigned workers() const noexcept { return workers_; }

  /// True when rho' vanishes at 0 and outside a finite radius; the quadrature
  /// then only visits pairs whose difference lies inside the support.
  bool compact_support() const noexcept { return compact_; }

 private:
  GridPtr grid_;
  KernelSpec kernel_;
  RecognitionSpec recognition_;
  KernelRows rows_;
  unsigned workers_;
  bool compact_;
};

/// Reusable scratch for repeated evaluations on slowly changing profiles.
struct NonlocalWorkspace {
  std::vector<std::size_t> order;  // node indices sorted by (value, index)
};

/// out[i] = G^h[w](x_i) for every node. Per-node sums run over quadrature nodes
/// in index order; the compact-support path skips only terms that are exactly
/// zero, so both paths give identical results.
void apply_nonlocality(const NonlocalContext& ctx, std::span<const double> w, std::span<double> out,
                       NonlocalWorkspace* workspace = nullptr);
GridFunction apply_nonlocality(const NonlocalContext& ctx, const GridFunction& w);

/// Dense reference evaluation (no pair skipping), single threaded.
void apply_nonlocality_dense(const NonlocalContext& ctx, std::span<const double> w, std::span<double> out);

/// Discrete payoff sum_y K(x, y) rho(w(x) - w(y)) h^n at node `node`.
double payoff(const NonlocalContext& ctx, const GridFunction& w, std::size_t node);

/// max_i |G^h[w](x_i)|
double stationary_residual(const NonlocalContext& ctx, const GridFunction& w);

/// min over nodes x and shifts s of payoff(x | w) - payoff(x | w + s at x only).
/// Never positive; negative values flag a profitable unilateral deviation.
double nash_residual(const NonlocalContext& ctx, const GridFunction& w, std::span<const double> shifts);

/// 81 shifts uniform on [-2R, 2R] with R = ||w||_inf (R = 1 for w == 0); 0 is exact.
std::vector<double> default_shift_grid(const GridFunction& w);

}  // namespace nlgame
