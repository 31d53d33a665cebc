#include "nlgame/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlgame/errors.hpp"

namespace nlgame {

double BandSummary::min_separation() const {
  if (separations.empty()) return std::numeric_limits<double>::infinity();
  return *std::min_element(separations.begin(), separations.end());
}

BandSummary detect_bands(std::span<const double> values, double gap_threshold) {
  if (values.empty()) throw InvalidArgument("detect_bands: no values");
  if (!(gap_threshold > 0.0)) throw InvalidArgument("detect_bands: gap threshold must be positive");
  std::vector<double> sorted(values.begin(), values.end());
  for (double v : sorted)
    if (!std::isfinite(v)) throw InvalidArgument("detect_bands: values must be finite");
  std::sort(sorted.begin(), sorted.end());

  BandSummary out;
  out.gap_threshold = gap_threshold;
  const double total = static_cast<double>(sorted.size());
  std::size_t start = 0;
  for (std::size_t i = 1; i <= sorted.size(); ++i) {
    if (i < sorted.size() && sorted[i] - sorted[i - 1] <= gap_threshold) continue;
    double sum = 0.0;
    for (std::size_t k = start; k < i; ++k) sum += sorted[k];
    const double count = static_cast<double>(i - start);
    out.centers.push_back(sum / count);
    out.masses.push_back(count / total);
    start = i;
  }
  for (std::size_t b = 1; b < out.centers.size(); ++b)
    out.separations.push_back(out.centers[b] - out.centers[b - 1]);
  return out;
}

std::vector<double> non_central_separations(const BandSummary& summary, double range_lo, double range_hi) {
  const std::size_t b = summary.count();
  if (b < 2) return {};
  const double mid = 0.5 * (range_lo + range_hi);
  std::size_t nearest = 0;
  for (std::size_t i = 1; i < b; ++i)
    if (std::abs(summary.centers[i] - mid) < std::abs(summary.centers[nearest] - mid)) nearest = i;

  std::vector<bool> central(b, false);
  if (std::abs(summary.centers[nearest] - mid) <= summary.gap_threshold) {
    central[nearest] = true;
  } else {
    const auto above = static_cast<std::size_t>(
        std::upper_bound(summary.centers.begin(), summary.centers.end(), mid) - summary.centers.begin());
    if (above > 0) central[above - 1] = true;
    if (above < b) central[above] = true;
  }
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < b; ++i)
    if (!central[i] && !central[i + 1]) out.push_back(summary.separations[i]);
  return out;
}

BandBoundReport check_band_bounds(const BandSummary& summary, double range, double support_radius) {
  if (!(support_radius > 0.0)) throw InvalidArgument("check_band_bounds: r must be positive");
  BandBoundReport rep;
  rep.bands = summary.count();
  const double b = static_cast<double>(rep.bands);
  rep.theorem_bound = std::floor(range / support_radius) + 1.0;
  rep.empirical_bound = range / (2.0 * support_radius) + 1.0;
  rep.theorem_bound_ok = b <= rep.theorem_bound;
  rep.empirical_bound_ok = b <= rep.empirical_bound;
  rep.min_separation_ok = summary.min_separation() >= support_radius;
  return rep;
}

Histogram density_histogram(std::span<const double> values, std::size_t bins, double lo, double hi) {
  if (bins < 2) throw InvalidArgument("density_histogram: need at least 2 bins");
  if (!(lo < hi)) throw InvalidArgument("density_histogram: range must satisfy lo < hi");
  Histogram hist;
  hist.lo = lo;
  hist.hi = hi;
  hist.counts.assign(bins, 0);
  const double width = (hi - lo) / static_cast<double>(bins);
  std::size_t total = 0;
  for (double v : values) {
    if (!(v >= lo && v <= hi)) continue;
    auto k = static_cast<std::size_t>((v - lo) / width);
    k = std::min(k, bins - 1);
    ++hist.counts[k];
    ++total;
  }
  hist.bin_centers.resize(bins);
  hist.log2_density.resize(bins);
  for (std::size_t k = 0; k < bins; ++k) {
    hist.bin_centers[k] = lo + (static_cast<double>(k) + 0.5) * width;
    hist.log2_density[k] =
        hist.counts[k] == 0
            ? -std::numeric_limits<double>::infinity()
            : std::log2(static_cast<double>(hist.counts[k]) / static_cast<double>(total) / width);
  }
  return hist;
}

double lipschitz_estimate(const Grid& grid, std::span<const double> values) {
  const std::size_t dim = grid.dimension();
  const auto& counts = grid.axis_counts();
  std::vector<std::size_t> stride(dim);
  std::size_t s = 1;
  for (std::size_t k = dim; k-- > 0;) {
    stride[k] = s;
    s *= counts[k];
  }
  double best = 0.0;
  for (std::size_t i = 0; i < grid.node_count(); ++i) {
    for (std::size_t k = 0; k < dim; ++k) {
      if (grid.axis_index(i, k) + 1 >= counts[k]) continue;
      best = std::max(best, std::abs(values[i + stride[k]] - values[i]));
    }
  }
  return best / grid.h();
}

double lipschitz_estimate(const GridFunction& w) { return lipschitz_estimate(w.grid(), w.values()); }

}  // namespace nlgame
