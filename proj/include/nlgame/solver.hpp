#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "nlgame/core.hpp"
#include "nlgame/kernels.hpp"
#include "nlgame/nonlocal.hpp"
#include "nlgame/recognition.hpp"

namespace nlgame {

/// Inhomogeneous term f(u, x, t) added to the right-hand side.
using Forcing = std::function<double(double u, std::span<const double> x, double t)>;

struct ProblemSpec {
  Domain domain;
  KernelSpec kernel;
  RecognitionSpec recognition;
  ScalarField initial;
  Forcing forcing;             // empty: homogeneous problem
  double horizon = 0;          // T
  double h = 0;
  std::optional<double> tau;   // nullopt: choose with stable_tau
  std::vector<double> snapshot_times;
};

struct SolveOptions {
  double safety = 0.5;
  std::size_t memory_cap_bytes = std::size_t{1} << 30;
  unsigned workers = 1;
};

/// Step bound safety / (L_rho D) from the discrete maximum principle, with L_rho
/// the Lipschitz bound of rho' on [-2|u0|, 2|u0|] and D the larger of the
/// largest kernel entry and the largest discrete row mass. Returns
/// safety * unconstrained when L_rho D == 0. Throws for non-coordination rho.
double stable_tau(const NonlocalContext& ctx, const GridFunction& u0, double safety = 0.5,
                  double unconstrained = 1.0);

/// One forward Euler step w + tau G^h[w] (+ tau f(w, x, t)). Throws BlowupError
/// naming the first node whose update is not finite.
GridFunction step(const NonlocalContext& ctx, const GridFunction& w, double tau,
                  const Forcing& forcing = {});

/// Integrates from u0 to `horizon` with fixed tau; the final step is shortened
/// to land on the horizon. Snapshots are taken at the time levels nearest to
/// the requested times, plus t = 0 and t = horizon.
SolveResult solve(const NonlocalContext& ctx, const GridFunction& u0, double horizon,
                  std::optional<double> tau, std::span<const double> snapshot_times = {},
                  const Forcing& forcing = {}, const SolveOptions& options = {});

SolveResult solve(const ProblemSpec& spec, const SolveOptions& options = {});

}  // namespace nlgame
