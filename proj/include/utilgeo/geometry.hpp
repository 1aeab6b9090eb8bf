#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace utilgeo {

inline constexpr double kDefaultIndifferenceTol = 1e-9;

// A utility vector over m candidates, one representative of its class under
// positive scaling and constant shift.
class RawUtility {
 public:
  explicit RawUtility(std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

 private:
  std::vector<double> values_;
};

// Canonical point of the utility space: either the indifference point or a
// unit vector of the zero-sum hyperplane H. Always carries its dimension m.
class UtilityPoint {
 public:
  static UtilityPoint indifference(std::size_t m);

  // Takes values that already satisfy the canonical invariants (sum 0,
  // norm 1, within 1e-12). Throws InvalidArgument otherwise.
  static UtilityPoint from_canonical(std::vector<double> values);

  bool is_indifference() const noexcept { return indifferent_; }
  std::size_t dimension() const noexcept { return m_; }

  // Unit vector in H; the zero vector for the indifference point.
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  friend bool operator==(const UtilityPoint&, const UtilityPoint&) = default;

 private:
  UtilityPoint(std::size_t m, std::vector<double> values, bool indifferent)
      : m_(m), values_(std::move(values)), indifferent_(indifferent) {}

  std::size_t m_ = 0;
  std::vector<double> values_;
  bool indifferent_ = true;
};

// Orthogonal projection onto H: u - mean(u) * 1.
std::vector<double> project_to_hyperplane(std::span<const double> u);
inline std::vector<double> project_to_hyperplane(const RawUtility& u) {
  return project_to_hyperplane(u.values());
}

UtilityPoint canonicalize(std::span<const double> u,
                          double tol = kDefaultIndifferenceTol);
inline UtilityPoint canonicalize(const RawUtility& u,
                                 double tol = kDefaultIndifferenceTol) {
  return canonicalize(u.values(), tol);
}

// Great-circle distance on the unit sphere of H, in [0, pi].
double distance(const UtilityPoint& x, const UtilityPoint& y);

UtilityPoint invert(const UtilityPoint& x);

// Candidate i's utility moves to candidate perm[i] (0-based labels).
UtilityPoint permute(const UtilityPoint& x, std::span<const std::size_t> perm);

// Path length along the six unit-cube edges that represent U_3 when each
// class is normalized to min -1 and max 1. Defined for m = 3 only.
double cube_distance_m3(const UtilityPoint& x, const UtilityPoint& y);

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);

// Orthonormal basis of H (m - 1 vectors) from Gram-Schmidt on
// P_H e_1, ..., P_H e_{m-1}.
std::vector<std::vector<double>> hyperplane_basis(std::size_t m);

// Orthonormal basis of H whose first vector is `pole` (a unit vector in H),
// completed by Gram-Schmidt on P_H e_1, P_H e_2, ...
std::vector<std::vector<double>> hyperplane_basis_at(std::span<const double> pole);

void check_permutation(std::span<const std::size_t> perm, std::size_t m);

}  // namespace utilgeo
