#pragma once

#include <cstddef>
#include <functional>

namespace utilgeo::numerics {

// Neumaier-compensated running sum. Result does not depend on how the
// rounding errors of individual additions are distributed, so parallel
// partial sums merged with merge() agree with the serial sum to ~1 ulp.
class CompensatedSum {
 public:
  void add(double x) noexcept;
  void merge(const CompensatedSum& other) noexcept;
  double value() const noexcept { return sum_ + compensation_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

// Adaptive Gauss-Kronrod integration of f over [a, b] to the requested
// relative error.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-10);

// Upper tail P[X >= x] of the chi-square law with `dof` degrees of freedom,
// via the regularized upper incomplete gamma function Q(dof/2, x/2).
double chi_square_upper_tail(double x, double dof);

// Asymptotic Kolmogorov survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_survival(double lambda);

}  // namespace utilgeo::numerics
