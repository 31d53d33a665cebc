#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace nlgame {

enum class RecognitionFamily { quad_coord, quad_anticoord, linear, bump, quad_coord_advect, table };

const char* to_string(RecognitionFamily family);

/// Pairwise payoff rho(z) of a strategy difference z, times a positive scale.
///
///   quad_coord        -z^2/2
///   quad_anticoord     z^2/2
///   linear             c z
///   bump               exp(-1/(1-(z/r)^2)) for |z| < r, else 0
///   quad_coord_advect -z^2/2 + c z
///   table              rho' piecewise linear through (z_k, d_k), zero outside the
///                      knots, with rho(0) given; d_k must vanish at both ends so
///                      rho is C^{1,1}
class RecognitionSpec {
 public:
  static RecognitionSpec quad_coord() { return RecognitionSpec(RecognitionFamily::quad_coord); }
  static RecognitionSpec quad_anticoord() { return RecognitionSpec(RecognitionFamily::quad_anticoord); }
  static RecognitionSpec linear(double c);
  static RecognitionSpec bump(double r);
  static RecognitionSpec quad_coord_advect(double c);
  static RecognitionSpec table(std::vector<double> knots, std::vector<double> derivative,
                               double rho_at_zero);

  RecognitionSpec scaled(double k) const;

  RecognitionFamily family() const noexcept { return family_; }
  double c() const noexcept { return c_; }
  double r() const noexcept { return r_; }
  double scale() const noexcept { return scale_; }
  double rho_at_zero() const noexcept { return rho0_; }
  const std::vector<double>& knots() const noexcept { return knots_; }
  const std::vector<double>& derivative_samples() const noexcept { return deriv_; }

  /// Radius a of supp rho' (infinite for the polynomial families).
  double support_radius() const noexcept;

  // Unscaled family evaluations; rho()/rho_prime() below apply the scale.
  double base_rho(double z) const;
  double base_rho_prime(double z) const;

 private:
  explicit RecognitionSpec(RecognitionFamily f) : family_(f) {}
  double table_integral(double z) const;  // int_{knots.front()}^{z} rho'

  RecognitionFamily family_;
  double c_ = 0;
  double r_ = 0;
  double scale_ = 1;
  double rho0_ = 0;
  std::vector<double> knots_;
  std::vector<double> deriv_;
  std::vector<double> cumulative_;
};

double rho(const RecognitionSpec& spec, double z);
double rho_prime(const RecognitionSpec& spec, double z);

/// Upper bound on the Lipschitz constant of rho' over [lo, hi]. Exact for the
/// polynomial and table families; the bump bound is sampled and inflated by 5%.
double lipschitz_bound(const RecognitionSpec& spec, double lo, double hi);
/// Upper bound on |rho'| over [lo, hi] (sampled for the bump).
double sup_bound(const RecognitionSpec& spec, double lo, double hi);

/// rho' <= 0 on z > 0, rho'(0) = 0, rho' >= 0 on z < 0.
bool is_coordination(const RecognitionSpec& spec);

/// Checks subquadratic growth rho(z) <= C z^2 + A on sampled z; throws InvalidArgument.
void validate(const RecognitionSpec& spec);

namespace detail {

inline double bump_rho_prime(double z, double r) {
  if (!(std::abs(z) < r)) return 0.0;
  const double q = z / r;
  const double gap = 1.0 - q * q;
  const double exponent = -1.0 / gap;
  if (exponent < -700.0) return 0.0;
  return -(2.0 * z / (r * r)) / (gap * gap) * std::exp(exponent);
}

}  // namespace detail

/// Calls f with a cheap callable z -> rho'(z) specialized to the family, so the
/// quadrature loop does not branch on the family per term.
template <class F>
decltype(auto) with_rho_prime(const RecognitionSpec& spec, F&& f) {
  const double k = spec.scale();
  switch (spec.family()) {
    case RecognitionFamily::quad_coord:
      return f([k](double z) { return -k * z; });
    case RecognitionFamily::quad_anticoord:
      return f([k](double z) { return k * z; });
    case RecognitionFamily::linear: {
      const double kc = k * spec.c();
      return f([kc](double) { return kc; });
    }
    case RecognitionFamily::quad_coord_advect: {
      const double c = spec.c();
      return f([k, c](double z) { return k * (c - z); });
    }
    case RecognitionFamily::bump: {
      const double r = spec.r();
      return f([k, r](double z) { return k * detail::bump_rho_prime(z, r); });
    }
    case RecognitionFamily::table:
      break;
  }
  return f([&spec](double z) { return rho_prime(spec, z); });
}

}  // namespace nlgame
