#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "utilgeo/geometry.hpp"

namespace utilgeo {

inline constexpr double kPreferenceBand = 1e-12;
inline constexpr double kConeTolerance = 1e-9;
inline constexpr double kOracleViolation = 1e-9;

// Point of the probability simplex over m candidates.
class Lottery {
 public:
  explicit Lottery(std::vector<double> probs);

  std::size_t size() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }

 private:
  std::vector<double> probs_;
};

// Difference M - L of two lotteries; an element of the tangent polytope.
class Bipoint {
 public:
  Bipoint(const Lottery& from, const Lottery& to);
  explicit Bipoint(std::vector<double> delta);

  std::span<const double> delta() const noexcept { return delta_; }

 private:
  std::vector<double> delta_;
};

// How the agent ranks M against L.
enum class Preference { LessPreferred, Indifferent, MorePreferred };

Preference prefers(std::span<const double> u, const Lottery& L, const Lottery& M);
Preference prefers(const UtilityPoint& u, const Lottery& L, const Lottery& M);
inline Preference prefers(const RawUtility& u, const Lottery& L, const Lottery& M) {
  return prefers(u.values(), L, M);
}

// Whether v is in the summation of A, i.e. whether its canonical vector is a
// nonnegative combination of the canonical vectors of A. The indifference
// point always belongs (empty combination).
bool sum_contains(std::span<const UtilityPoint> A, const UtilityPoint& v);

// Result of projecting a vector onto the convex cone spanned by some
// generators: the nonnegative coefficients and the residual norm.
struct ConeProjection {
  std::vector<double> coefficients;
  double residual = 0.0;
};

// Nonnegative least squares min |G c - target| s.t. c >= 0 by the
// Lawson-Hanson active-set method. Generators are the columns of G.
ConeProjection project_onto_cone(std::span<const std::vector<double>> generators,
                                 std::span<const double> target);

// Grid approximation of the unanimity condition: false iff some grid
// direction D of the unit sphere of H has <u, D> >= 0 for every member u of
// A but <v, D> < -1e-9. The grid is also projected onto the orthogonal
// complement of every small subset of A so that lower-dimensional dual cones
// are sampled.
bool unanimity_oracle(std::span<const UtilityPoint> A, const UtilityPoint& v,
                      std::size_t grid_resolution);

// Deterministic quasi-uniform directions on the unit sphere of H, as
// m-vectors. m = 3: equally spaced angles; m = 4: Fibonacci sphere;
// m = 5: super-Fibonacci spiral on S^3; m >= 6: fixed-seed Gaussian draws.
std::vector<std::vector<double>> sphere_grid(std::size_t m, std::size_t resolution);

// Typical angular spacing of sphere_grid(m, resolution).
double grid_angular_spacing(std::size_t m, std::size_t resolution);

}  // namespace utilgeo
