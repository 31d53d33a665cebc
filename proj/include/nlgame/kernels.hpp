#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlgame/core.hpp"

namespace nlgame {

enum class KernelFamily { uniform, gaussian, table };

const char* to_string(KernelFamily family);

/// Interaction kernel K(x, y). Every built-in family is translation invariant.
///
/// uniform:  K = 1 / vol(domain)
/// gaussian: K = exp(-|x-y|^2 / (2 s^2)) / (s sqrt(2 pi)), not renormalized on the domain
/// table:    K = J(x - y), J piecewise linear through (offset, value) samples and
///           zero outside [offsets.front(), offsets.back()]. In more than one
///           dimension the table is radial: J(|x - y|).
class KernelSpec {
 public:
  static KernelSpec uniform();
  static KernelSpec gaussian(double width);
  static KernelSpec table(std::vector<double> offsets, std::vector<double> values);

  KernelFamily family() const noexcept { return family_; }
  double width() const noexcept { return width_; }
  const std::vector<double>& offsets() const noexcept { return offsets_; }
  const std::vector<double>& values() const noexcept { return values_; }
  /// Largest |offset| carrying a sample; infinite for non-table families.
  double support_radius() const noexcept;
  /// True when J(d) == J(-d) for every displacement.
  bool symmetric() const;

  const std::optional<double>& lower_bound() const noexcept { return lower_bound_; }
  KernelSpec with_lower_bound(double lambda) const;

  /// J(d) for a displacement d = x - y, given the domain volume (uniform family).
  double profile(std::span<const double> displacement, double volume) const;

 private:
  double table_at(double d) const;

  KernelFamily family_ = KernelFamily::uniform;
  double width_ = 0;
  std::vector<double> offsets_;
  std::vector<double> values_;
  std::optional<double> lower_bound_;
};

/// Reads a two-column CSV (offset,value) with strictly increasing offsets.
/// A non-numeric first line is treated as a header.
KernelSpec load_kernel_table(const std::string& path);

double eval_kernel(const KernelSpec& spec, const Domain& domain, std::span<const double> x,
                   std::span<const double> y);

/// Kernel rows K(x_i, .) over the quadrature nodes, materialized from a single
/// displacement table (Toeplitz structure). In 1-D each row is a contiguous
/// slice of that table; in higher dimensions rows are gathered on demand.
class KernelRows {
 public:
  KernelRows(const KernelSpec& spec, const GridPtr& grid);

  /// Row for node i. `scratch` is only touched in more than one dimension.
  std::span<const double> row(std::size_t i, std::vector<double>& scratch) const;
  std::size_t row_length() const noexcept { return grid_->quad_count(); }
  /// max over all (node, quad node) pairs
  double max_entry() const noexcept { return max_entry_; }

 private:
  GridPtr grid_;
  std::vector<std::size_t> cells_;    // cells per axis
  std::vector<std::size_t> strides_;  // displacement table strides
  std::vector<double> table_;
  double max_entry_ = 0;
};

std::vector<double> kernel_row(const KernelSpec& spec, const GridPtr& grid, std::size_t node);

/// sum_j K(x_node, y_j) h^n over the quadrature nodes.
double discrete_l1(const KernelSpec& spec, const GridPtr& grid, std::size_t node);
/// max over nodes of discrete_l1
double max_discrete_l1(const KernelSpec& spec, const GridPtr& grid);

/// max over nodes x and quadrature nodes y of K(x, y).
double sup_row_bound(const KernelSpec& spec, const GridPtr& grid);

/// Bound L_K with ||K(x+e,.) - K(x,.)||_{L1} <= L_K |e|, taken as the total
/// variation of the profile over R^n (0 for uniform, 2 J(0) for a 1-D gaussian).
double kernel_l1_lipschitz(const KernelSpec& spec, std::size_t dimension);

/// Checks K(x, y) >= lambda for every node pair (true when no bound is set).
bool check_lower_bound(const KernelSpec& spec, const GridPtr& grid);

}  // namespace nlgame
