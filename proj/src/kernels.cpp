#include "nlgame/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nlgame/errors.hpp"

namespace nlgame {

const char* to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::uniform: return "uniform";
    case KernelFamily::gaussian: return "gaussian";
    case KernelFamily::table: return "table";
  }
  return "unknown";
}

KernelSpec KernelSpec::uniform() { return KernelSpec{}; }

KernelSpec KernelSpec::gaussian(double width) {
  if (!(width > 0.0) || !std::isfinite(width))
    throw InvalidArgument("gaussian kernel width must be positive");
  KernelSpec k;
  k.family_ = KernelFamily::gaussian;
  k.width_ = width;
  return k;
}

KernelSpec KernelSpec::table(std::vector<double> offsets, std::vector<double> values) {
  if (offsets.size() != values.size() || offsets.size() < 2)
    throw InvalidArgument("kernel table needs at least two (offset, value) samples");
  for (std::size_t i = 0; i < offsets.size(); ++i) {
    if (!std::isfinite(offsets[i]) || !std::isfinite(values[i]))
      throw InvalidArgument("kernel table entries must be finite");
    if (values[i] < 0.0) throw InvalidArgument("kernel table values must be nonnegative");
    if (i > 0 && !(offsets[i] > offsets[i - 1]))
      throw InvalidArgument("kernel table offsets must be strictly increasing");
  }
  KernelSpec k;
  k.family_ = KernelFamily::table;
  k.offsets_ = std::move(offsets);
  k.values_ = std::move(values);
  return k;
}

KernelSpec KernelSpec::with_lower_bound(double lambda) const {
  if (!(lambda >= 0.0)) throw InvalidArgument("kernel lower bound must be nonnegative");
  KernelSpec k = *this;
  k.lower_bound_ = lambda;
  return k;
}

double KernelSpec::support_radius() const noexcept {
  if (family_ != KernelFamily::table) return std::numeric_limits<double>::infinity();
  return std::max(std::abs(offsets_.front()), std::abs(offsets_.back()));
}

bool KernelSpec::symmetric() const {
  if (family_ != KernelFamily::table) return true;
  for (std::size_t i = 0; i < offsets_.size(); ++i) {
    if (std::abs(table_at(-offsets_[i]) - values_[i]) > 1e-15 * std::max(1.0, values_[i]))
      return false;
  }
  return true;
}

double KernelSpec::table_at(double d) const {
  // Displacements built as k*h and as x - y differ by rounding; an endpoint
  // value must not depend on which one we got.
  const double slack = 1e-12 * std::max({1.0, std::abs(offsets_.front()), std::abs(offsets_.back())});
  if (d < offsets_.front() - slack || d > offsets_.back() + slack) return 0.0;
  d = std::clamp(d, offsets_.front(), offsets_.back());
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), d);
  if (it == offsets_.end()) return values_.back();
  const auto hi = static_cast<std::size_t>(it - offsets_.begin());
  const std::size_t lo = hi - 1;
  const double t = (d - offsets_[lo]) / (offsets_[hi] - offsets_[lo]);
  return values_[lo] + t * (values_[hi] - values_[lo]);
}

double KernelSpec::profile(std::span<const double> displacement, double volume) const {
  switch (family_) {
    case KernelFamily::uniform:
      return 1.0 / volume;
    case KernelFamily::gaussian: {
      double r2 = 0.0;
      for (double d : displacement) r2 += d * d;
      const double norm = 1.0 / (width_ * std::sqrt(2.0 * std::numbers::pi));
      return norm * std::exp(-r2 / (2.0 * width_ * width_));
    }
    case KernelFamily::table: {
      if (displacement.size() == 1) return table_at(displacement[0]);
      double r2 = 0.0;
      for (double d : displacement) r2 += d * d;
      return table_at(std::sqrt(r2));
    }
  }
  return 0.0;
}

KernelSpec load_kernel_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open kernel table '" + path + "'");
  std::vector<double> offsets, values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    double a = 0, b = 0;
    if (!(fields >> a >> b)) {
      if (offsets.empty() && lineno == 1) continue;  // header
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 'offset,value'");
    }
    offsets.push_back(a);
    values.push_back(b);
  }
  return KernelSpec::table(std::move(offsets), std::move(values));
}

double eval_kernel(const KernelSpec& spec, const Domain& domain, std::span<const double> x,
                   std::span<const double> y) {
  if (!domain.contains(x) || !domain.contains(y))
    throw InvalidArgument("kernel evaluated at a point outside the domain");
  std::vector<double> d(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) d[k] = x[k] - y[k];
  return spec.profile(d, domain.volume());
}

KernelRows::KernelRows(const KernelSpec& spec, const GridPtr& grid) : grid_(grid) {
  const std::size_t dim = grid->dimension();
  const double volume = grid->domain().volume();
  cells_.resize(dim);
  strides_.resize(dim);
  std::size_t size = 1;
  for (std::size_t k = dim; k-- > 0;) {
    cells_[k] = grid->axis_counts()[k] - 1;
    strides_[k] = size;
    size *= 2 * cells_[k];
  }
  // Slot q on axis k holds the displacement x - y = (cells_k - q) h, i.e.
  // q = j_k - i_k + cells_k for node index i and quad index j.
  table_.resize(size);
  std::vector<double> disp(dim);
  for (std::size_t p = 0; p < size; ++p) {
    std::size_t rest = p;
    for (std::size_t k = 0; k < dim; ++k) {
      const std::size_t q = rest / strides_[k];
      rest %= strides_[k];
      disp[k] = (static_cast<double>(cells_[k]) - static_cast<double>(q)) * grid->h();
    }
    table_[p] = spec.profile(disp, volume);
  }
  // Only slots reachable from some (node, quad node) pair count towards the max;
  // with q in [0, 2 cells) every slot is reachable.
  max_entry_ = table_.empty() ? 0.0 : *std::max_element(table_.begin(), table_.end());
}

std::span<const double> KernelRows::row(std::size_t i, std::vector<double>& scratch) const {
  const Grid& g = *grid_;
  const std::size_t dim = g.dimension();
  if (dim == 1) {
    const std::size_t start = cells_[0] - g.axis_index(i, 0);
    return {table_.data() + start, g.quad_count()};
  }
  scratch.resize(g.quad_count());
  std::size_t base = 0;
  for (std::size_t k = 0; k < dim; ++k) base += (cells_[k] - g.axis_index(i, k)) * strides_[k];
  for (std::size_t j = 0; j < g.quad_count(); ++j) {
    const std::size_t node = g.quad_to_node(j);
    std::size_t p = base;
    for (std::size_t k = 0; k < dim; ++k) p += g.axis_index(node, k) * strides_[k];
    scratch[j] = table_[p];
  }
  return scratch;
}

std::vector<double> kernel_row(const KernelSpec& spec, const GridPtr& grid, std::size_t node) {
  if (node >= grid->node_count()) throw InvalidArgument("kernel_row: node index out of range");
  KernelRows rows(spec, grid);
  std::vector<double> scratch;
  auto r = rows.row(node, scratch);
  return {r.begin(), r.end()};
}

double discrete_l1(const KernelSpec& spec, const GridPtr& grid, std::size_t node) {
  const auto row = kernel_row(spec, grid, node);
  double sum = 0.0;
  for (double v : row) sum += v;
  return sum * grid->weight();
}

double max_discrete_l1(const KernelSpec& spec, const GridPtr& grid) {
  KernelRows rows(spec, grid);
  std::vector<double> scratch;
  double best = 0.0;
  for (std::size_t i = 0; i < grid->node_count(); ++i) {
    double sum = 0.0;
    for (double v : rows.row(i, scratch)) sum += v;
    best = std::max(best, sum * grid->weight());
  }
  return best;
}

double sup_row_bound(const KernelSpec& spec, const GridPtr& grid) {
  return KernelRows(spec, grid).max_entry();
}

double kernel_l1_lipschitz(const KernelSpec& spec, std::size_t dimension) {
  const double n = static_cast<double>(dimension);
  // Surface area of the unit sphere in R^n.
  const double sphere = 2.0 * std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0);
  switch (spec.family()) {
    case KernelFamily::uniform:
      return 0.0;
    case KernelFamily::gaussian: {
      // int |grad J| over R^n for the radial gaussian profile
      const double s = spec.width();
      const double peak = 1.0 / (s * std::sqrt(2.0 * std::numbers::pi));
      const double radial = 0.5 * std::pow(2.0 * s * s, (n + 1.0) / 2.0) * std::tgamma((n + 1.0) / 2.0);
      return peak / (s * s) * sphere * radial;
    }
    case KernelFamily::table: {
      const auto& o = spec.offsets();
      const auto& v = spec.values();
      if (dimension == 1) {
        double tv = v.front() + v.back();  // jumps to zero outside the table
        for (std::size_t i = 1; i < v.size(); ++i) tv += std::abs(v[i] - v[i - 1]);
        return tv;
      }
      // Radial profile: only offsets >= 0 matter.
      double tv = 0.0;
      double prev_r = -1.0, prev_v = 0.0;
      for (std::size_t i = 0; i < o.size(); ++i) {
        if (o[i] < 0.0) continue;
        if (prev_r >= 0.0) {
          const double slope = (v[i] - prev_v) / (o[i] - prev_r);
          tv += std::abs(slope) * sphere * (std::pow(o[i], n) - std::pow(prev_r, n)) / n;
        }
        prev_r = o[i];
        prev_v = v[i];
      }
      if (prev_r >= 0.0) tv += prev_v * sphere * std::pow(prev_r, n - 1.0);
      return tv;
    }
  }
  return 0.0;
}

bool check_lower_bound(const KernelSpec& spec, const GridPtr& grid) {
  if (!spec.lower_bound()) return true;
  const double lambda = *spec.lower_bound();
  const double volume = grid->domain().volume();
  const std::size_t dim = grid->dimension();
  std::vector<double> d(dim);
  for (std::size_t i = 0; i < grid->node_count(); ++i) {
    for (std::size_t j = 0; j < grid->node_count(); ++j) {
      for (std::size_t k = 0; k < dim; ++k) d[k] = grid->node(i)[k] - grid->node(j)[k];
      if (spec.profile(d, volume) < lambda) return false;
    }
  }
  return true;
}

}  // namespace nlgame
