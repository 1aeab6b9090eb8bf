#pragma once

// Generators shared by the unit and acceptance tests.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <vector>

#include "utilgeo/geometry.hpp"
#include "utilgeo/random.hpp"

namespace utilgeo::testing {

// Uniform point of the unit sphere of H, built independently of the
// library's sampler (Gaussian vector, explicit centering).
inline UtilityPoint random_point(std::size_t m, RandomStream& rng) {
  while (true) {
    auto g = rng.normals(m);
    const double mean = std::accumulate(g.begin(), g.end(), 0.0) / static_cast<double>(m);
    for (double& x : g) x -= mean;
    if (norm(g) > 1e-6) return canonicalize(g);
  }
}

inline std::vector<std::size_t> random_permutation(std::size_t m, RandomStream& rng) {
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = m; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
    std::swap(perm[i - 1], perm[std::min(j, i - 1)]);
  }
  return perm;
}

}  // namespace utilgeo::testing
