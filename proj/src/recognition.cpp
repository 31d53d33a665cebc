#include "nlgame/recognition.hpp"

#include <algorithm>
#include <cmath>

#include "nlgame/errors.hpp"

namespace nlgame {

namespace {

constexpr std::size_t kSamples = 100000;

// Sample [lo, hi] uniformly (endpoints included) and return max |g|.
template <class G>
double sampled_max(double lo, double hi, G&& g) {
  if (!(lo <= hi)) return 0.0;
  double best = 0.0;
  for (std::size_t i = 0; i < kSamples; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(kSamples - 1);
    const double z = lo + (hi - lo) * t;
    best = std::max(best, std::abs(g(z)));
  }
  return best;
}

void check_interval(double lo, double hi) {
  if (!(lo <= hi)) throw InvalidArgument("interval must satisfy lo <= hi");
}

}  // namespace

const char* to_string(RecognitionFamily family) {
  switch (family) {
    case RecognitionFamily::quad_coord: return "quad_coord";
    case RecognitionFamily::quad_anticoord: return "quad_anticoord";
    case RecognitionFamily::linear: return "linear";
    case RecognitionFamily::bump: return "bump";
    case RecognitionFamily::quad_coord_advect: return "quad_coord_advect";
    case RecognitionFamily::table: return "table";
  }
  return "unknown";
}

RecognitionSpec RecognitionSpec::linear(double c) {
  if (!std::isfinite(c)) throw InvalidArgument("linear recognition: c must be finite");
  RecognitionSpec s(RecognitionFamily::linear);
  s.c_ = c;
  return s;
}

RecognitionSpec RecognitionSpec::bump(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("bump recognition: r must be positive");
  RecognitionSpec s(RecognitionFamily::bump);
  s.r_ = r;
  return s;
}

RecognitionSpec RecognitionSpec::quad_coord_advect(double c) {
  if (!std::isfinite(c)) throw InvalidArgument("advection recognition: c must be finite");
  RecognitionSpec s(RecognitionFamily::quad_coord_advect);
  s.c_ = c;
  return s;
}

RecognitionSpec RecognitionSpec::table(std::vector<double> knots, std::vector<double> derivative,
                                       double rho_at_zero) {
  if (knots.size() != derivative.size() || knots.size() < 2)
    throw InvalidArgument("recognition table needs at least two knots");
  for (std::size_t i = 0; i < knots.size(); ++i) {
    if (!std::isfinite(knots[i]) || !std::isfinite(derivative[i]))
      throw InvalidArgument("recognition table entries must be finite");
    if (i > 0 && !(knots[i] > knots[i - 1]))
      throw InvalidArgument("recognition table knots must be strictly increasing");
  }
  if (derivative.front() != 0.0 || derivative.back() != 0.0)
    throw InvalidArgument("recognition table derivative must vanish at both ends");
  if (!std::isfinite(rho_at_zero)) throw InvalidArgument("recognition table rho(0) must be finite");
  RecognitionSpec s(RecognitionFamily::table);
  s.knots_ = std::move(knots);
  s.deriv_ = std::move(derivative);
  s.rho0_ = rho_at_zero;
  s.cumulative_.assign(s.knots_.size(), 0.0);
  for (std::size_t i = 1; i < s.knots_.size(); ++i)
    s.cumulative_[i] = s.cumulative_[i - 1] +
                       0.5 * (s.deriv_[i] + s.deriv_[i - 1]) * (s.knots_[i] - s.knots_[i - 1]);
  return s;
}

RecognitionSpec RecognitionSpec::scaled(double k) const {
  if (!(k > 0.0) || !std::isfinite(k)) throw InvalidArgument("recognition scale must be positive");
  RecognitionSpec s = *this;
  s.scale_ *= k;
  return s;
}

double RecognitionSpec::support_radius() const noexcept {
  switch (family_) {
    case RecognitionFamily::bump: return r_;
    case RecognitionFamily::table: return std::max(std::abs(knots_.front()), std::abs(knots_.back()));
    default: return std::numeric_limits<double>::infinity();
  }
}

double RecognitionSpec::table_integral(double z) const {
  if (z <= knots_.front()) return 0.0;
  if (z >= knots_.back()) return cumulative_.back();
  const auto hi = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), z) - knots_.begin());
  const std::size_t lo = hi - 1;
  const double dz = z - knots_[lo];
  const double slope = (deriv_[hi] - deriv_[lo]) / (knots_[hi] - knots_[lo]);
  return cumulative_[lo] + deriv_[lo] * dz + 0.5 * slope * dz * dz;
}

double RecognitionSpec::base_rho(double z) const {
  switch (family_) {
    case RecognitionFamily::quad_coord: return -0.5 * z * z;
    case RecognitionFamily::quad_anticoord: return 0.5 * z * z;
    case RecognitionFamily::linear: return c_ * z;
    case RecognitionFamily::quad_coord_advect: return -0.5 * z * z + c_ * z;
    case RecognitionFamily::bump: {
      if (!(std::abs(z) < r_)) return 0.0;
      const double q = z / r_;
      const double exponent = -1.0 / (1.0 - q * q);
      return exponent < -700.0 ? 0.0 : std::exp(exponent);
    }
    case RecognitionFamily::table: return rho0_ + table_integral(z) - table_integral(0.0);
  }
  return 0.0;
}

double RecognitionSpec::base_rho_prime(double z) const {
  switch (family_) {
    case RecognitionFamily::quad_coord: return -z;
    case RecognitionFamily::quad_anticoord: return z;
    case RecognitionFamily::linear: return c_;
    case RecognitionFamily::quad_coord_advect: return c_ - z;
    case RecognitionFamily::bump: return detail::bump_rho_prime(z, r_);
    case RecognitionFamily::table: {
      if (z <= knots_.front() || z >= knots_.back()) return 0.0;
      const auto hi = static_cast<std::size_t>(std::upper_bound(knots_.begin(), knots_.end(), z) - knots_.begin());
      const std::size_t lo = hi - 1;
      const double t = (z - knots_[lo]) / (knots_[hi] - knots_[lo]);
      return deriv_[lo] + t * (deriv_[hi] - deriv_[lo]);
    }
  }
  return 0.0;
}

double rho(const RecognitionSpec& spec, double z) { return spec.scale() * spec.base_rho(z); }

double rho_prime(const RecognitionSpec& spec, double z) { return spec.scale() * spec.base_rho_prime(z); }

double lipschitz_bound(const RecognitionSpec& spec, double lo, double hi) {
  check_interval(lo, hi);
  const double k = spec.scale();
  switch (spec.family()) {
    case RecognitionFamily::quad_coord:
    case RecognitionFamily::quad_anticoord:
    case RecognitionFamily::quad_coord_advect:
      return k;
    case RecognitionFamily::linear:
      return 0.0;
    case RecognitionFamily::bump: {
      const double r = spec.r();
      const double a = std::max(lo, -r), b = std::min(hi, r);
      const double step = 1e-6 * r;
      const double m = sampled_max(a, b, [&](double z) {
        return (spec.base_rho_prime(z + step) - spec.base_rho_prime(z - step)) / (2.0 * step);
      });
      return 1.05 * k * m;
    }
    case RecognitionFamily::table: {
      const auto& z = spec.knots();
      const auto& d = spec.derivative_samples();
      double best = 0.0;
      for (std::size_t i = 1; i < z.size(); ++i) {
        if (z[i] <= lo || z[i - 1] >= hi) continue;
        best = std::max(best, std::abs((d[i] - d[i - 1]) / (z[i] - z[i - 1])));
      }
      return k * best;
    }
  }
  return 0.0;
}

double sup_bound(const RecognitionSpec& spec, double lo, double hi) {
  check_interval(lo, hi);
  const double k = spec.scale();
  switch (spec.family()) {
    case RecognitionFamily::quad_coord:
    case RecognitionFamily::quad_anticoord:
      return k * std::max(std::abs(lo), std::abs(hi));
    case RecognitionFamily::linear:
      return k * std::abs(spec.c());
    case RecognitionFamily::quad_coord_advect:
      return k * std::max(std::abs(spec.c() - lo), std::abs(spec.c() - hi));
    case RecognitionFamily::bump: {
      const double r = spec.r();
      return k * sampled_max(std::max(lo, -r), std::min(hi, r),
                             [&](double z) { return spec.base_rho_prime(z); });
    }
    case RecognitionFamily::table: {
      double best = std::max(std::abs(spec.base_rho_prime(lo)), std::abs(spec.base_rho_prime(hi)));
      const auto& z = spec.knots();
      for (std::size_t i = 0; i < z.size(); ++i)
        if (z[i] >= lo && z[i] <= hi) best = std::max(best, std::abs(spec.derivative_samples()[i]));
      return k * best;
    }
  }
  return 0.0;
}

bool is_coordination(const RecognitionSpec& spec) {
  switch (spec.family()) {
    case RecognitionFamily::quad_coord:
    case RecognitionFamily::bump:
      return true;
    case RecognitionFamily::quad_anticoord:
      return false;
    case RecognitionFamily::linear:
    case RecognitionFamily::quad_coord_advect:
      return spec.c() == 0.0;
    case RecognitionFamily::table: {
      const auto& d = spec.derivative_samples();
      double peak = 0.0;
      for (double v : d) peak = std::max(peak, std::abs(v));
      if (std::abs(spec.base_rho_prime(0.0)) > 1e-14 * std::max(1.0, peak)) return false;
      const double a = spec.support_radius();
      for (std::size_t i = 0; i < kSamples; ++i) {
        const double z = -4.0 * a + 8.0 * a * static_cast<double>(i) / static_cast<double>(kSamples - 1);
        const double v = spec.base_rho_prime(z);
        if ((z > 0.0 && v > 0.0) || (z < 0.0 && v < 0.0)) return false;
      }
      return true;
    }
  }
  return false;
}

void validate(const RecognitionSpec& spec) {
  double quad = 0.0, constant = 0.0;
  switch (spec.family()) {
    case RecognitionFamily::quad_coord:
    case RecognitionFamily::quad_anticoord:
      quad = 0.5;
      break;
    case RecognitionFamily::linear:
      quad = 1.0;
      constant = spec.c() * spec.c() / 4.0;
      break;
    case RecognitionFamily::quad_coord_advect:
      constant = spec.c() * spec.c() / 2.0;
      break;
    case RecognitionFamily::bump:
      constant = std::exp(-1.0);
      break;
    case RecognitionFamily::table: {
      constant = std::abs(spec.rho_at_zero());
      const auto& z = spec.knots();
      const auto& d = spec.derivative_samples();
      for (std::size_t i = 1; i < z.size(); ++i)
        constant += 0.5 * (std::abs(d[i]) + std::abs(d[i - 1])) * (z[i] - z[i - 1]);
      break;
    }
  }
  const double slack = 1e-12 * (1.0 + quad + constant);
  for (int i = -2000; i <= 2000; ++i) {
    const double z = 0.05 * i;
    if (spec.base_rho(z) > quad * z * z + constant + slack)
      throw InvalidArgument(std::string("recognition '") + to_string(spec.family()) +
                            "' violates subquadratic growth");
  }
}

}  // namespace nlgame
