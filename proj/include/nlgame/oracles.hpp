#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlgame/core.hpp"
#include "nlgame/kernels.hpp"
#include "nlgame/recognition.hpp"

namespace nlgame {

enum class OracleExample { unstructured_coord, unstructured_anticoord, dis_coordination, coord_advect };

const char* to_string(OracleExample example);
OracleExample parse_oracle_example(const std::string& name);

/// Closed-form reference problems with uniform kernels or linear rho.
///
///   unstructured_coord      u = e^{-t}(u0 - m) + m
///   unstructured_anticoord  u = e^{t}(u0 - m) + m
///   dis_coordination        u = u0 + t c ||K(x, .)||_{L1}
///   coord_advect            u = e^{-t}(u0 - m) + m + c t
///
/// m is the domain mean of u0, computed once by midpoint quadrature on about
/// 10^6 cells independent of any solver grid.
class OracleSpec {
 public:
  OracleSpec(OracleExample example, Domain domain, ScalarField u0, double c = 0.0,
             KernelSpec kernel = KernelSpec::uniform());

  OracleExample example() const noexcept { return example_; }
  const Domain& domain() const noexcept { return domain_; }
  const ScalarField& initial() const noexcept { return u0_; }
  double c() const noexcept { return c_; }
  const KernelSpec& kernel() const noexcept { return kernel_; }
  double mean() const noexcept { return mean_; }
  std::size_t mean_cells() const noexcept { return mean_cells_; }

  /// Recognition function the example pairs with.
  RecognitionSpec recognition() const;

 private:
  OracleExample example_;
  Domain domain_;
  ScalarField u0_;
  double c_;
  KernelSpec kernel_;
  double mean_ = 0;
  std::size_t mean_cells_ = 0;
};

/// Midpoint rule with `cells` cells in total (rounded to a tensor product).
double midpoint_mean(const Domain& domain, const ScalarField& f, std::size_t cells, std::size_t* used = nullptr);
/// Midpoint approximation of ||K(x, .)||_{L1(domain)}.
double kernel_l1_norm(const KernelSpec& kernel, const Domain& domain, std::span<const double> x,
                      std::size_t cells = 1000000);

double closed_form(const OracleSpec& spec, std::span<const double> x, double t);

struct Resolution {
  double h;
  double tau;
};

struct ErrorRow {
  double h;
  double tau;
  double sup_error;
};

enum class OrderStatus { fitted, exact, insufficient_data };

const char* to_string(OrderStatus status);

struct ConvergenceReport {
  std::vector<ErrorRow> rows;
  OrderStatus status = OrderStatus::insufficient_data;
  double order = 0;               // least-squares slope of log error vs log(tau + h)
  bool excluded_coarsest = false; // pre-asymptotic first level dropped from the fit
};

/// Solves the example at each (h, tau), each level halving the previous one,
/// and fits the observed order against tau + h. Levels run in parallel.
ConvergenceReport convergence_study(const OracleSpec& spec, std::span<const Resolution> resolutions,
                                    double horizon, unsigned workers = 1);

/// CSV with header `h,tau,sup_error`.
std::string error_table_csv(const ConvergenceReport& report);

}  // namespace nlgame
