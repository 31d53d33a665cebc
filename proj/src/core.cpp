#include "nlgame/core.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "nlgame/errors.hpp"

namespace nlgame {

namespace {

constexpr double kDivisorTol = 1e-9;

bool divides(double length, double h, std::size_t* count) {
  const double ratio = length / h;
  const double n = std::round(ratio);
  if (n < 1.0) return false;
  if (std::abs(ratio - n) > kDivisorTol * std::max(1.0, n)) return false;
  if (count) *count = static_cast<std::size_t>(n);
  return true;
}

}  // namespace

Domain::Domain(std::vector<double> lower, std::vector<double> upper)
    : lower_(std::move(lower)), upper_(std::move(upper)) {
  if (lower_.empty()) throw InvalidArgument("domain must have dimension >= 1");
  if (lower_.size() != upper_.size())
    throw InvalidArgument("domain lower/upper have different lengths");
  for (std::size_t i = 0; i < lower_.size(); ++i) {
    if (!std::isfinite(lower_[i]) || !std::isfinite(upper_[i]) || !(lower_[i] < upper_[i])) {
      std::ostringstream os;
      os << "domain axis " << i << " must satisfy lower < upper (got [" << lower_[i] << ", "
         << upper_[i] << "])";
      throw InvalidArgument(os.str());
    }
  }
}

double Domain::volume() const noexcept {
  double v = 1.0;
  for (std::size_t i = 0; i < lower_.size(); ++i) v *= upper_[i] - lower_[i];
  return v;
}

bool Domain::contains(std::span<const double> p) const {
  if (p.size() != dimension()) return false;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double slack = 1e-12 * std::max(1.0, std::abs(upper_[i]) + std::abs(lower_[i]));
    if (p[i] < lower_[i] - slack || p[i] > upper_[i] + slack) return false;
  }
  return true;
}

std::shared_ptr<const Grid> Grid::build(const Domain& domain, double h) {
  if (!(h > 0.0) || !std::isfinite(h)) throw InvalidArgument("grid spacing h must be positive");
  const std::size_t dim = domain.dimension();
  double min_len = domain.length(0);
  for (std::size_t k = 1; k < dim; ++k) min_len = std::min(min_len, domain.length(k));
  if (h > min_len * (1.0 + 1e-12))
    throw InvalidArgument("grid spacing h exceeds an axis length of the domain");

  std::shared_ptr<Grid> grid(new Grid(domain));
  grid->requested_h_ = h;

  auto all_divide = [&](double step, std::vector<std::size_t>& counts) {
    counts.assign(dim, 0);
    for (std::size_t k = 0; k < dim; ++k)
      if (!divides(domain.length(k), step, &counts[k])) return false;
    return true;
  };

  std::vector<std::size_t> cells;
  double step = h;
  if (all_divide(h, cells)) {
    step = domain.length(0) / static_cast<double>(cells[0]);
  } else {
    // Smallest cell count on axis 0 whose spacing is <= h and divides every axis.
    const double len0 = domain.length(0);
    const auto first = static_cast<std::size_t>(std::ceil(len0 / h * (1.0 - 1e-12)));
    const std::size_t last = first * 1000 + 1000;
    bool found = false;
    for (std::size_t m = std::max<std::size_t>(first, 1); m <= last; ++m) {
      const double candidate = len0 / static_cast<double>(m);
      if (candidate > h) continue;
      if (all_divide(candidate, cells)) {
        step = candidate;
        found = true;
        break;
      }
    }
    if (!found) throw InvalidArgument("no common spacing <= h divides every axis of the domain");
    grid->snapped_ = true;
  }
  grid->h_ = step;
  grid->weight_ = std::pow(step, static_cast<double>(dim));

  grid->axis_counts_.resize(dim);
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) {
    grid->axis_counts_[k] = cells[k] + 1;
    total *= cells[k] + 1;
  }
  grid->node_count_ = total;
  grid->coords_.resize(total * dim);
  grid->multi_index_.resize(total * dim);
  grid->node_to_quad_.assign(total, npos);

  std::vector<std::size_t> idx(dim, 0);
  for (std::size_t i = 0; i < total; ++i) {
    bool interior = true;
    for (std::size_t k = 0; k < dim; ++k) {
      const double x = idx[k] == cells[k]
                           ? domain.upper()[k]
                           : domain.lower()[k] + static_cast<double>(idx[k]) * step;
      grid->coords_[i * dim + k] = x;
      grid->multi_index_[i * dim + k] = idx[k];
      if (idx[k] == cells[k]) interior = false;
    }
    if (interior) {
      grid->node_to_quad_[i] = grid->quad_to_node_.size();
      grid->quad_to_node_.push_back(i);
    }
    // Advance the multi-index, last axis fastest.
    for (std::size_t k = dim; k-- > 0;) {
      if (++idx[k] <= cells[k]) break;
      idx[k] = 0;
    }
  }
  return grid;
}

GridFunction::GridFunction(GridPtr grid, std::vector<double> values, double time)
    : grid_(std::move(grid)), values_(std::move(values)), time_(time) {
  if (!grid_) throw InvalidArgument("grid function needs a grid");
  if (values_.size() != grid_->node_count())
    throw InvalidArgument("grid function length does not match the node count");
  if (!(time_ >= 0.0)) throw InvalidArgument("grid function time must be nonnegative");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!std::isfinite(values_[i]))
      throw InvalidArgument("grid function value at node " + std::to_string(i) + " is not finite");
  }
}

double GridFunction::sup_norm() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double GridFunction::min() const noexcept { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const noexcept { return *std::max_element(values_.begin(), values_.end()); }

GridFunction sample(const GridPtr& grid, const ScalarField& f) {
  std::vector<double> values(grid->node_count());
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = f(grid->node(i));
    if (!std::isfinite(values[i]))
      throw InvalidArgument("sampled field is not finite at node " + std::to_string(i));
  }
  return GridFunction(grid, std::move(values), 0.0);
}

const char* to_string(MonitorKind kind) {
  switch (kind) {
    case MonitorKind::sup_norm_increase: return "sup_norm_increase";
    case MonitorKind::lipschitz_envelope: return "lipschitz_envelope";
    case MonitorKind::non_finite: return "non_finite";
  }
  return "unknown";
}

std::size_t SolveResult::count(MonitorKind kind) const {
  return static_cast<std::size_t>(std::count_if(monitor_flags.begin(), monitor_flags.end(),
                                                [kind](const MonitorFlag& f) { return f.kind == kind; }));
}

}  // namespace nlgame
