#include "nlgame/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "nlgame/errors.hpp"
#include "nlgame/format.hpp"
#include "nlgame/solver.hpp"

namespace nlgame {

const char* to_string(OracleExample example) {
  switch (example) {
    case OracleExample::unstructured_coord: return "unstructured_coord";
    case OracleExample::unstructured_anticoord: return "unstructured_anticoord";
    case OracleExample::dis_coordination: return "dis_coordination";
    case OracleExample::coord_advect: return "coord_advect";
  }
  return "unknown";
}

OracleExample parse_oracle_example(const std::string& name) {
  for (auto e : {OracleExample::unstructured_coord, OracleExample::unstructured_anticoord,
                 OracleExample::dis_coordination, OracleExample::coord_advect})
    if (name == to_string(e)) return e;
  throw InvalidArgument("unknown oracle example '" + name + "'");
}

const char* to_string(OrderStatus status) {
  switch (status) {
    case OrderStatus::fitted: return "fitted";
    case OrderStatus::exact: return "exact";
    case OrderStatus::insufficient_data: return "insufficient data";
  }
  return "unknown";
}

double midpoint_mean(const Domain& domain, const ScalarField& f, std::size_t cells, std::size_t* used) {
  const std::size_t dim = domain.dimension();
  const auto per_axis = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(std::pow(static_cast<double>(cells), 1.0 / static_cast<double>(dim)))));
  std::size_t total = 1;
  for (std::size_t k = 0; k < dim; ++k) total *= per_axis;
  if (used) *used = total;
  std::vector<std::size_t> idx(dim, 0);
  std::vector<double> p(dim);
  // Neumaier summation: 10^6 terms would otherwise lose ~1e-12.
  double sum = 0.0, comp = 0.0;
  for (std::size_t c = 0; c < total; ++c) {
    for (std::size_t k = 0; k < dim; ++k)
      p[k] = domain.lower()[k] + (static_cast<double>(idx[k]) + 0.5) * domain.length(k) / static_cast<double>(per_axis);
    const double v = f(p);
    const double t = sum + v;
    comp += std::abs(sum) >= std::abs(v) ? (sum - t) + v : (v - t) + sum;
    sum = t;
    for (std::size_t k = dim; k-- > 0;) {
      if (++idx[k] < per_axis) break;
      idx[k] = 0;
    }
  }
  return (sum + comp) / static_cast<double>(total);
}

double kernel_l1_norm(const KernelSpec& kernel, const Domain& domain, std::span<const double> x, std::size_t cells) {
  if (kernel.family() == KernelFamily::uniform) return 1.0;
  std::vector<double> d(x.size());
  const double volume = domain.volume();
  const double mean = midpoint_mean(domain, [&](std::span<const double> y) {
    for (std::size_t k = 0; k < y.size(); ++k) d[k] = x[k] - y[k];
    return kernel.profile(d, volume);
  }, cells);
  return mean * volume;
}

OracleSpec::OracleSpec(OracleExample example, Domain domain, ScalarField u0, double c, KernelSpec kernel)
    : example_(example), domain_(std::move(domain)), u0_(std::move(u0)), c_(c), kernel_(std::move(kernel)) {
  if (!u0_) throw InvalidArgument("oracle needs an initial condition");
  if (example_ != OracleExample::dis_coordination && kernel_.family() != KernelFamily::uniform)
    throw InvalidArgument(std::string("oracle '") + to_string(example_) + "' requires the uniform kernel");
  mean_ = midpoint_mean(domain_, u0_, 1000000, &mean_cells_);
}

RecognitionSpec OracleSpec::recognition() const {
  switch (example_) {
    case OracleExample::unstructured_coord: return RecognitionSpec::quad_coord();
    case OracleExample::unstructured_anticoord: return RecognitionSpec::quad_anticoord();
    case OracleExample::dis_coordination: return RecognitionSpec::linear(c_);
    case OracleExample::coord_advect: return RecognitionSpec::quad_coord_advect(c_);
  }
  throw InvalidArgument("unsupported oracle example");
}

double closed_form(const OracleSpec& spec, std::span<const double> x, double t) {
  if (!spec.domain().contains(x)) throw InvalidArgument("closed_form: point outside the domain");
  if (!(t >= 0.0)) throw InvalidArgument("closed_form: time must be nonnegative");
  const double u0 = spec.initial()(x);
  const double m = spec.mean();
  switch (spec.example()) {
    case OracleExample::unstructured_coord: return std::exp(-t) * (u0 - m) + m;
    case OracleExample::unstructured_anticoord: return std::exp(t) * (u0 - m) + m;
    case OracleExample::dis_coordination:
      if (t == 0.0) return u0;
      return u0 + t * spec.c() * kernel_l1_norm(spec.kernel(), spec.domain(), x);
    case OracleExample::coord_advect: return std::exp(-t) * (u0 - m) + m + spec.c() * t;
  }
  return u0;
}

ConvergenceReport convergence_study(const OracleSpec& spec, std::span<const Resolution> resolutions,
                                    double horizon, unsigned workers) {
  if (resolutions.empty()) throw InvalidArgument("convergence_study: no resolutions");
  for (std::size_t i = 1; i < resolutions.size(); ++i) {
    const double rh = resolutions[i - 1].h / resolutions[i].h;
    const double rt = resolutions[i - 1].tau / resolutions[i].tau;
    if (std::abs(rh - 2.0) > 1e-6 || std::abs(rt - 2.0) > 1e-6)
      throw InvalidArgument("convergence_study: each level must halve h and tau");
  }

  ConvergenceReport report;
  report.rows.resize(resolutions.size());
  std::atomic<std::size_t> next{0};
  std::vector<std::string> failures(resolutions.size());
  auto run = [&] {
    for (std::size_t i = next++; i < resolutions.size(); i = next++) {
      try {
        const auto [h, tau] = resolutions[i];
        auto grid = Grid::build(spec.domain(), h);
        NonlocalContext ctx(grid, spec.kernel(), spec.recognition());
        const GridFunction u0 = sample(grid, spec.initial());
        const SolveResult res = solve(ctx, u0, horizon, tau);
        if (res.blowup) throw BlowupError(res.blowup_node, 0.0, "solver blew up");
        const GridFunction& w = res.final();
        double err = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k)
          err = std::max(err, std::abs(w[k] - closed_form(spec, grid->node(k), horizon)));
        report.rows[i] = {grid->h(), tau, err};
      } catch (const std::exception& e) {
        failures[i] = e.what();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const unsigned n = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(resolutions.size())));
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(run);
    run();
  }
  for (std::size_t i = 0; i < failures.size(); ++i)
    if (!failures[i].empty())
      throw BlowupError(0, 0.0, "convergence_study: level " + std::to_string(i) + " failed: " + failures[i]);

  double scale = 0.0;
  {
    auto grid = Grid::build(spec.domain(), resolutions.back().h);
    scale = sample(grid, spec.initial()).sup_norm();
  }
  const double exact_tol = 1e-12 * std::max(1.0, scale);
  if (std::all_of(report.rows.begin(), report.rows.end(), [&](const ErrorRow& r) { return r.sup_error <= exact_tol; })) {
    report.status = OrderStatus::exact;
    return report;
  }

  std::size_t first = 0;
  if (report.rows.size() >= 3 && report.rows[0].sup_error > 0.5 * scale) {
    first = 1;
    report.excluded_coarsest = true;
  }
  std::vector<double> xs, ys;
  for (std::size_t i = first; i < report.rows.size(); ++i) {
    if (report.rows[i].sup_error <= 0.0) continue;
    xs.push_back(std::log(report.rows[i].tau + report.rows[i].h));
    ys.push_back(std::log(report.rows[i].sup_error));
  }
  if (xs.size() < 2) {
    report.status = OrderStatus::insufficient_data;
    return report;
  }
  const double n = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  report.order = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  report.status = OrderStatus::fitted;
  return report;
}

std::string error_table_csv(const ConvergenceReport& report) {
  std::string out = "h,tau,sup_error\n";
  for (const auto& r : report.rows) out += fmt_double(r.h) + "," + fmt_double(r.tau) + "," + fmt_double(r.sup_error) + "\n";
  return out;
}

}  // namespace nlgame
