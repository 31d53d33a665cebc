#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace nlgame {

/// Axis-aligned box [lower, upper] in R^n.
class Domain {
 public:
  Domain(std::vector<double> lower, std::vector<double> upper);
  static Domain interval(double lo, double hi) { return Domain({lo}, {hi}); }

  std::size_t dimension() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double length(std::size_t axis) const { return upper_[axis] - lower_[axis]; }
  double volume() const noexcept;
  /// Membership with a small relative slack for rounding in node coordinates.
  bool contains(std::span<const double> p) const;

  bool operator==(const Domain&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

using ScalarField = std::function<double(std::span<const double>)>;

/// Uniform tensor grid on a Domain.
///
/// `nodes` is the closed grid (both faces on every axis); `quad_nodes` drops the
/// upper face on every axis and carries the quadrature weight h^n. Nodes are
/// ordered lexicographically by multi-index with axis 0 varying slowest.
class Grid {
 public:
  /// Builds the grid. A spacing that does not divide every axis length is
  /// snapped down to the nearest exact divisor; see snapped().
  static std::shared_ptr<const Grid> build(const Domain& domain, double h);

  const Domain& domain() const noexcept { return domain_; }
  std::size_t dimension() const noexcept { return domain_.dimension(); }
  double h() const noexcept { return h_; }
  double requested_h() const noexcept { return requested_h_; }
  bool snapped() const noexcept { return snapped_; }
  double weight() const noexcept { return weight_; }

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t quad_count() const noexcept { return quad_to_node_.size(); }
  /// Nodes per axis on the closed grid.
  const std::vector<std::size_t>& axis_counts() const noexcept { return axis_counts_; }

  std::span<const double> node(std::size_t i) const {
    return {coords_.data() + i * dimension(), dimension()};
  }
  std::span<const double> quad_node(std::size_t j) const { return node(quad_to_node_[j]); }
  std::size_t quad_to_node(std::size_t j) const { return quad_to_node_[j]; }
  /// Quad index of node i, or npos when i lies on an upper face.
  std::size_t node_to_quad(std::size_t i) const { return node_to_quad_[i]; }
  /// Per-axis integer index of node i.
  std::size_t axis_index(std::size_t i, std::size_t axis) const {
    return multi_index_[i * dimension() + axis];
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  Grid(const Domain& domain) : domain_(domain) {}

  Domain domain_;
  double h_ = 0;
  double requested_h_ = 0;
  bool snapped_ = false;
  double weight_ = 0;
  std::size_t node_count_ = 0;
  std::vector<std::size_t> axis_counts_;
  std::vector<double> coords_;
  std::vector<std::size_t> multi_index_;
  std::vector<std::size_t> quad_to_node_;
  std::vector<std::size_t> node_to_quad_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Values on the closed node set of a grid at a given time.
class GridFunction {
 public:
  GridFunction(GridPtr grid, std::vector<double> values, double time = 0.0);

  const Grid& grid() const noexcept { return *grid_; }
  const GridPtr& grid_ptr() const noexcept { return grid_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const noexcept { return values_.size(); }
  double time() const noexcept { return time_; }

  double sup_norm() const noexcept;
  double min() const noexcept;
  double max() const noexcept;

 private:
  GridPtr grid_;
  std::vector<double> values_;
  double time_;
};

/// Projection of a field onto the grid nodes; time is 0.
GridFunction sample(const GridPtr& grid, const ScalarField& f);

enum class MonitorKind { sup_norm_increase, lipschitz_envelope, non_finite };

const char* to_string(MonitorKind kind);

struct MonitorFlag {
  std::size_t step;
  MonitorKind kind;
  double value;  // offending quantity (norm increase, estimate, node index)
};

struct SolveResult {
  std::vector<GridFunction> snapshots;
  std::vector<double> sup_norm_series;   // one entry per time level, t_0 included
  std::vector<double> lipschitz_series;  // one entry per snapshot
  std::vector<MonitorFlag> monitor_flags;
  std::vector<std::string> warnings;
  double tau = 0;
  std::size_t steps = 0;
  bool blowup = false;
  std::size_t blowup_step = 0;
  std::size_t blowup_node = 0;

  const GridFunction& final() const { return snapshots.back(); }
  std::size_t count(MonitorKind kind) const;
};

}  // namespace nlgame
