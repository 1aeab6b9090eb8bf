#include "utilgeo/numerics.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>

#include "utilgeo/errors.hpp"

namespace utilgeo::numerics {

void CompensatedSum::add(double x) noexcept {
  const double t = sum_ + x;
  if (std::abs(sum_) >= std::abs(x)) {
    compensation_ += (sum_ - t) + x;
  } else {
    compensation_ += (x - t) + sum_;
  }
  sum_ = t;
}

void CompensatedSum::merge(const CompensatedSum& other) noexcept {
  add(other.sum_);
  add(other.compensation_);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol) {
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 61>;
  double error = 0.0;
  const double value = Quadrature::integrate(f, a, b, 25, rel_tol, &error);
  if (!std::isfinite(value)) {
    fail(ErrorCode::InvalidArgument, "integrate: non-finite integral");
  }
  return value;
}

double chi_square_upper_tail(double x, double dof) {
  if (dof <= 0.0) {
    fail(ErrorCode::InvalidArgument, "chi-square tail needs dof > 0");
  }
  if (x <= 0.0) return 1.0;
  return boost::math::gamma_q(0.5 * dof, 0.5 * x);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  // The alternating series converges slowly for small lambda; use the
  // theta-function form there.
  if (lambda < 1.18) {
    const double pi = 3.14159265358979323846;
    const double y = std::exp(-pi * pi / (8.0 * lambda * lambda));
    double cdf = 0.0;
    for (int k = 1; k <= 7; k += 2) cdf += std::pow(y, k * k);
    cdf *= std::sqrt(2.0 * pi) / lambda;
    return 1.0 - cdf;
  }
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    if (term < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace utilgeo::numerics
