#include "utilgeo/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "utilgeo/errors.hpp"
#include "utilgeo/numerics.hpp"

namespace utilgeo {

namespace {

constexpr double kCanonicalTol = 1e-12;

void check_finite(std::span<const double> u, const char* what) {
  if (u.empty()) {
    fail(ErrorCode::InvalidArgument, std::string(what) + ": empty utility vector");
  }
  for (double x : u) {
    if (!std::isfinite(x)) {
      fail(ErrorCode::InvalidArgument, std::string(what) + ": non-finite utility");
    }
  }
}

void require_same_dimension(const UtilityPoint& x, const UtilityPoint& y) {
  if (x.dimension() != y.dimension()) {
    fail(ErrorCode::DimensionMismatch,
         "points live in U_" + std::to_string(x.dimension()) + " and U_" +
             std::to_string(y.dimension()));
  }
}

void require_not_indifferent(const UtilityPoint& x) {
  if (x.is_indifference()) {
    fail(ErrorCode::IndifferencePoint,
         "the indifference point has no position on the sphere");
  }
}

}  // namespace

RawUtility::RawUtility(std::vector<double> values) : values_(std::move(values)) {
  check_finite(values_, "RawUtility");
}

UtilityPoint UtilityPoint::indifference(std::size_t m) {
  if (m == 0) fail(ErrorCode::InvalidArgument, "m must be at least 1");
  return UtilityPoint(m, std::vector<double>(m, 0.0), true);
}

UtilityPoint UtilityPoint::from_canonical(std::vector<double> values) {
  check_finite(values, "UtilityPoint");
  numerics::CompensatedSum sum;
  for (double x : values) sum.add(x);
  if (std::abs(sum.value()) > kCanonicalTol ||
      std::abs(norm(values) - 1.0) > kCanonicalTol) {
    fail(ErrorCode::InvalidArgument,
         "values are not a unit vector of the zero-sum hyperplane");
  }
  const std::size_t m = values.size();
  return UtilityPoint(m, std::move(values), false);
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) {
  // Scaled to avoid overflow on large raw utilities.
  double scale = 0.0;
  for (double x : a) scale = std::max(scale, std::abs(x));
  if (scale == 0.0) return 0.0;
  double s = 0.0;
  for (double x : a) {
    const double y = x / scale;
    s += y * y;
  }
  return scale * std::sqrt(s);
}

std::vector<double> project_to_hyperplane(std::span<const double> u) {
  check_finite(u, "project_to_hyperplane");
  numerics::CompensatedSum sum;
  for (double x : u) sum.add(x);
  const double mean = sum.value() / static_cast<double>(u.size());
  std::vector<double> out(u.begin(), u.end());
  for (double& x : out) x -= mean;
  return out;
}

UtilityPoint canonicalize(std::span<const double> u, double tol) {
  if (!(tol > 0.0)) fail(ErrorCode::InvalidArgument, "canonicalize: tol must be > 0");
  std::vector<double> p = project_to_hyperplane(u);
  const double n = norm(p);
  if (n <= tol) return UtilityPoint::indifference(u.size());
  for (double& x : p) x /= n;
  // One more centering pass removes the rounding residue of the division so
  // the stored vector sums to zero at the 1e-16 level.
  numerics::CompensatedSum sum;
  for (double x : p) sum.add(x);
  const double mean = sum.value() / static_cast<double>(p.size());
  for (double& x : p) x -= mean;
  return UtilityPoint::from_canonical(std::move(p));
}

double distance(const UtilityPoint& x, const UtilityPoint& y) {
  require_same_dimension(x, y);
  require_not_indifferent(x);
  require_not_indifferent(y);
  // 2 atan2(|x-y|, |x+y|) equals arccos<x,y> for unit vectors but stays
  // accurate near 0 and pi, where the arccos argument saturates.
  double diff = 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < x.dimension(); ++i) {
    const double d = x[i] - y[i];
    const double s = x[i] + y[i];
    diff += d * d;
    sum += s * s;
  }
  return 2.0 * std::atan2(std::sqrt(diff), std::sqrt(sum));
}

UtilityPoint invert(const UtilityPoint& x) {
  if (x.is_indifference()) return x;
  std::vector<double> v(x.values().begin(), x.values().end());
  for (double& c : v) c = -c;
  return UtilityPoint::from_canonical(std::move(v));
}

void check_permutation(std::span<const std::size_t> perm, std::size_t m) {
  if (perm.size() != m) {
    fail(ErrorCode::DimensionMismatch, "permutation length differs from m");
  }
  std::vector<bool> seen(m, false);
  for (std::size_t target : perm) {
    if (target >= m || seen[target]) {
      fail(ErrorCode::InvalidArgument, "not a permutation of the candidates");
    }
    seen[target] = true;
  }
}

UtilityPoint permute(const UtilityPoint& x, std::span<const std::size_t> perm) {
  check_permutation(perm, x.dimension());
  if (x.is_indifference()) return x;
  std::vector<double> v(x.dimension());
  for (std::size_t i = 0; i < perm.size(); ++i) v[perm[i]] = x[i];
  return UtilityPoint::from_canonical(std::move(v));
}

namespace {

// Hexagon of cube edges, consecutive vertices differ in exactly one
// coordinate. Every edge has length 2; the closed path has length 12.
constexpr std::array<std::array<double, 3>, 6> kHexagon{{
    {1, -1, -1},
    {1, 1, -1},
    {-1, 1, -1},
    {-1, 1, 1},
    {-1, -1, 1},
    {1, -1, 1},
}};
constexpr double kEdgeLength = 2.0;
constexpr double kHexagonLength = 12.0;

// Arc-length position of a point on the hexagon, in [0, 12).
double hexagon_position(const UtilityPoint& x) {
  const auto v = x.values();
  const double lo = *std::min_element(v.begin(), v.end());
  const double hi = *std::max_element(v.begin(), v.end());
  std::array<double, 3> r{};
  for (std::size_t i = 0; i < 3; ++i) r[i] = 2.0 * (v[i] - lo) / (hi - lo) - 1.0;

  double best_gap = std::numeric_limits<double>::infinity();
  double best_position = 0.0;
  for (std::size_t k = 0; k < kHexagon.size(); ++k) {
    const auto& a = kHexagon[k];
    const auto& b = kHexagon[(k + 1) % kHexagon.size()];
    // Parameter of the closest point on segment a-b.
    double num = 0.0;
    for (std::size_t i = 0; i < 3; ++i) num += (r[i] - a[i]) * (b[i] - a[i]);
    const double t = std::clamp(num / (kEdgeLength * kEdgeLength), 0.0, 1.0);
    double gap = 0.0;
    for (std::size_t i = 0; i < 3; ++i) {
      const double d = r[i] - (a[i] + t * (b[i] - a[i]));
      gap += d * d;
    }
    if (gap < best_gap) {
      best_gap = gap;
      best_position = kEdgeLength * (static_cast<double>(k) + t);
    }
  }
  return std::fmod(best_position, kHexagonLength);
}

}  // namespace

double cube_distance_m3(const UtilityPoint& x, const UtilityPoint& y) {
  if (x.dimension() != 3 || y.dimension() != 3) {
    fail(ErrorCode::DimensionMismatch, "cube metric is defined for m = 3 only");
  }
  require_not_indifferent(x);
  require_not_indifferent(y);
  const double gap = std::abs(hexagon_position(x) - hexagon_position(y));
  return std::min(gap, kHexagonLength - gap);
}

namespace {

std::vector<std::vector<double>> gram_schmidt_fill(
    std::vector<std::vector<double>> basis, std::size_t m) {
  for (std::size_t j = 0; j < m && basis.size() + 1 < m; ++j) {
    std::vector<double> e(m, 0.0);
    e[j] = 1.0;
    std::vector<double> v = project_to_hyperplane(e);
    // Two passes of classical Gram-Schmidt for orthogonality to ~1e-16.
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : basis) {
        const double c = dot(v, b);
        for (std::size_t i = 0; i < m; ++i) v[i] -= c * b[i];
      }
    }
    const double n = norm(v);
    if (n < 1e-8) continue;
    for (double& c : v) c /= n;
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace

std::vector<std::vector<double>> hyperplane_basis(std::size_t m) {
  if (m == 0) fail(ErrorCode::InvalidArgument, "m must be at least 1");
  return gram_schmidt_fill({}, m);
}

std::vector<std::vector<double>> hyperplane_basis_at(std::span<const double> pole) {
  const std::size_t m = pole.size();
  if (m < 2) fail(ErrorCode::InvalidArgument, "H is trivial for m < 2");
  std::vector<std::vector<double>> basis;
  basis.emplace_back(pole.begin(), pole.end());
  return gram_schmidt_fill(std::move(basis), m);
}

}  // namespace utilgeo
