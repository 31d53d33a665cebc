#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlgame/core.hpp"

namespace nlgame {

struct BandSummary {
  std::vector<double> centers;      // strictly increasing
  std::vector<double> masses;       // fraction of values per band, sums to 1
  std::vector<double> separations;  // centers[i+1] - centers[i]
  double gap_threshold = 0;

  std::size_t count() const noexcept { return centers.size(); }
  double min_separation() const;  // +inf with fewer than two bands
};

/// Sorts the values and starts a new band wherever consecutive values differ
/// by more than gap_threshold. Band center is the mean of its members.
BandSummary detect_bands(std::span<const double> values, double gap_threshold);

/// Gaps between consecutive bands that are both non-central. The central band
/// is the one whose center lies within gap_threshold of the range midpoint;
/// when there is none, the two bands on either side of the midpoint are central.
std::vector<double> non_central_separations(const BandSummary& summary, double range_lo, double range_hi);

struct BandBoundReport {
  std::size_t bands = 0;
  double theorem_bound = 0;    // floor(R / r) + 1
  double empirical_bound = 0;  // R / (2 r) + 1
  bool theorem_bound_ok = false;
  bool empirical_bound_ok = false;
  bool min_separation_ok = false;  // min separation >= r
};

BandBoundReport check_band_bounds(const BandSummary& summary, double range, double support_radius);

struct Histogram {
  double lo = 0, hi = 0;
  std::vector<std::size_t> counts;
  std::vector<double> bin_centers;
  /// log2(count / total / bin width); -inf marks an empty bin.
  std::vector<double> log2_density;
};

Histogram density_histogram(std::span<const double> values, std::size_t bins, double lo, double hi);

/// max over axis-neighbour node pairs of |w(a) - w(b)| / h.
double lipschitz_estimate(const Grid& grid, std::span<const double> values);
double lipschitz_estimate(const GridFunction& w);

}  // namespace nlgame
