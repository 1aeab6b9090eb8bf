#include "utilgeo/lottery.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "utilgeo/errors.hpp"
#include "utilgeo/numerics.hpp"
#include "utilgeo/random.hpp"

namespace utilgeo {

namespace {

constexpr double kSimplexTol = 1e-12;
// Grid directions projected onto a face are feasible up to this rounding.
constexpr double kFeasibilitySlack = 1e-12;
constexpr std::size_t kMaxSubsetMembers = 8;

void require_dimension(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    fail(ErrorCode::DimensionMismatch, std::string(what) + ": expected m = " +
                                           std::to_string(want) + ", got " +
                                           std::to_string(got));
  }
}

}  // namespace

Lottery::Lottery(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) fail(ErrorCode::InvalidArgument, "lottery over zero candidates");
  numerics::CompensatedSum total;
  for (double p : probs_) {
    if (!std::isfinite(p) || p < 0.0) {
      fail(ErrorCode::InvalidArgument, "lottery probabilities must be finite and >= 0");
    }
    total.add(p);
  }
  if (std::abs(total.value() - 1.0) > kSimplexTol) {
    fail(ErrorCode::InvalidArgument, "lottery probabilities must sum to 1");
  }
}

Bipoint::Bipoint(const Lottery& from, const Lottery& to) {
  require_dimension(to.size(), from.size(), "bipoint");
  delta_.resize(from.size());
  for (std::size_t i = 0; i < delta_.size(); ++i) {
    delta_[i] = to.probs()[i] - from.probs()[i];
  }
}

Bipoint::Bipoint(std::vector<double> delta) : delta_(std::move(delta)) {
  numerics::CompensatedSum total;
  for (double d : delta_) total.add(d);
  if (std::abs(total.value()) > kSimplexTol) {
    fail(ErrorCode::InvalidArgument, "bipoint must lie in the zero-sum hyperplane");
  }
}

Preference prefers(std::span<const double> u, const Lottery& L, const Lottery& M) {
  require_dimension(L.size(), u.size(), "prefers");
  require_dimension(M.size(), u.size(), "prefers");
  const Bipoint lm(L, M);
  const double gain = dot(u, lm.delta());
  if (gain > kPreferenceBand) return Preference::MorePreferred;
  if (gain < -kPreferenceBand) return Preference::LessPreferred;
  return Preference::Indifferent;
}

Preference prefers(const UtilityPoint& u, const Lottery& L, const Lottery& M) {
  return prefers(u.values(), L, M);
}

ConeProjection project_onto_cone(std::span<const std::vector<double>> generators,
                                 std::span<const double> target) {
  const auto n = static_cast<Eigen::Index>(target.size());
  const auto k = static_cast<Eigen::Index>(generators.size());
  Eigen::MatrixXd G(n, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    require_dimension(generators[j].size(), target.size(), "cone generator");
    for (Eigen::Index i = 0; i < n; ++i) G(i, j) = generators[j][i];
  }
  const Eigen::VectorXd b = Eigen::Map<const Eigen::VectorXd>(target.data(), n);

  Eigen::VectorXd x = Eigen::VectorXd::Zero(k);
  std::vector<bool> passive(k, false);
  const double scale = std::max(1.0, G.cwiseAbs().maxCoeff()) * std::max(1.0, b.norm());
  const double gradient_tol = 1e-14 * scale * static_cast<double>(std::max<Eigen::Index>(k, 1));

  auto solve_passive = [&](Eigen::VectorXd& z) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (passive[j]) cols.push_back(j);
    }
    z = Eigen::VectorXd::Zero(k);
    if (cols.empty()) return;
    Eigen::MatrixXd Gp(n, static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) Gp.col(static_cast<Eigen::Index>(c)) = G.col(cols[c]);
    const Eigen::VectorXd zp = Gp.colPivHouseholderQr().solve(b);
    for (std::size_t c = 0; c < cols.size(); ++c) z(cols[c]) = zp(static_cast<Eigen::Index>(c));
  };

  const int max_outer = static_cast<int>(3 * k + 10);
  for (int outer = 0; outer < max_outer; ++outer) {
    const Eigen::VectorXd w = G.transpose() * (b - G * x);
    Eigen::Index entering = -1;
    double best = gradient_tol;
    for (Eigen::Index j = 0; j < k; ++j) {
      if (!passive[j] && w(j) > best) {
        best = w(j);
        entering = j;
      }
    }
    if (entering < 0) break;
    passive[entering] = true;

    Eigen::VectorXd z;
    for (int inner = 0; inner <= static_cast<int>(k); ++inner) {
      solve_passive(z);
      bool all_positive = true;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[j] && z(j) <= 0.0) all_positive = false;
      }
      if (all_positive) break;
      double alpha = 1.0;
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[j] && z(j) <= 0.0) alpha = std::min(alpha, x(j) / (x(j) - z(j)));
      }
      x += alpha * (z - x);
      for (Eigen::Index j = 0; j < k; ++j) {
        if (passive[j] && x(j) <= 1e-15) {
          passive[j] = false;
          x(j) = 0.0;
        }
      }
    }
    for (Eigen::Index j = 0; j < k; ++j) x(j) = passive[j] ? z(j) : 0.0;
  }

  ConeProjection out;
  out.coefficients.assign(x.data(), x.data() + k);
  out.residual = (G * x - b).norm();
  return out;
}

bool sum_contains(std::span<const UtilityPoint> A, const UtilityPoint& v) {
  const std::size_t m = v.dimension();
  std::vector<std::vector<double>> generators;
  for (const auto& u : A) {
    require_dimension(u.dimension(), m, "sum_contains");
    if (!u.is_indifference()) generators.emplace_back(u.values().begin(), u.values().end());
  }
  if (v.is_indifference()) return true;
  if (generators.empty()) return false;
  return project_onto_cone(generators, v.values()).residual <= kConeTolerance;
}

std::vector<std::vector<double>> sphere_grid(std::size_t m, std::size_t resolution) {
  if (m < 2) return {};
  const auto basis = hyperplane_basis(m);
  const std::size_t dim = basis.size();
  auto embed = [&](std::span<const double> coords) {
    std::vector<double> d(m, 0.0);
    for (std::size_t j = 0; j < dim; ++j) {
      for (std::size_t i = 0; i < m; ++i) d[i] += coords[j] * basis[j][i];
    }
    return d;
  };

  std::vector<std::vector<double>> grid;
  const double two_pi = 2.0 * std::numbers::pi;
  const auto n = static_cast<double>(resolution);
  if (m == 2) {
    grid.push_back(basis[0]);
    grid.push_back(embed(std::vector<double>{-1.0}));
    return grid;
  }
  grid.reserve(resolution);
  for (std::size_t i = 0; i < resolution; ++i) {
    const double s = static_cast<double>(i) + 0.5;
    if (m == 3) {
      const double a = two_pi * static_cast<double>(i) / n;
      grid.push_back(embed(std::vector<double>{std::cos(a), std::sin(a)}));
    } else if (m == 4) {
      const double golden_angle = std::numbers::pi * (3.0 - std::sqrt(5.0));
      const double z = 1.0 - 2.0 * s / n;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden_angle * static_cast<double>(i);
      grid.push_back(embed(std::vector<double>{r * std::cos(phi), r * std::sin(phi), z}));
    } else if (m == 5) {
      // Super-Fibonacci spiral on S^3.
      constexpr double phi = 1.4142135623730950488;
      constexpr double psi = 1.533751168755204288118041;
      const double r = std::sqrt(s / n);
      const double R = std::sqrt(1.0 - s / n);
      const double alpha = two_pi * s / phi;
      const double beta = two_pi * s / psi;
      grid.push_back(embed(std::vector<double>{r * std::sin(alpha), r * std::cos(alpha),
                                               R * std::sin(beta), R * std::cos(beta)}));
    }
  }
  if (m >= 6) {
    RandomStream stream(0x9E3779B97F4A7C15ULL ^ m);
    while (grid.size() < resolution) {
      auto coords = stream.normals(dim);
      const double len = norm(coords);
      if (len < 1e-12) continue;
      for (double& c : coords) c /= len;
      grid.push_back(embed(coords));
    }
  }
  return grid;
}

double grid_angular_spacing(std::size_t m, std::size_t resolution) {
  if (m <= 2) return std::numbers::pi;
  const auto n = static_cast<double>(resolution);
  if (m == 3) return 2.0 * std::numbers::pi / n;
  const double d = static_cast<double>(m - 2);
  const double area =
      2.0 * std::pow(std::numbers::pi, (d + 1.0) / 2.0) / std::tgamma((d + 1.0) / 2.0);
  return std::pow(area / n, 1.0 / d);
}

namespace {

// Orthonormal basis of span(vectors); empty if they are all zero.
std::vector<std::vector<double>> orthonormalize(const std::vector<const std::vector<double>*>& vectors) {
  std::vector<std::vector<double>> q;
  for (const auto* v : vectors) {
    std::vector<double> w = *v;
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& b : q) {
        const double c = dot(w, b);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] -= c * b[i];
      }
    }
    const double len = norm(w);
    if (len < 1e-10) continue;
    for (double& x : w) x /= len;
    q.push_back(std::move(w));
  }
  return q;
}

}  // namespace

bool unanimity_oracle(std::span<const UtilityPoint> A, const UtilityPoint& v,
                      std::size_t grid_resolution) {
  if (grid_resolution < 16) {
    fail(ErrorCode::InvalidArgument, "unanimity_oracle needs grid_resolution >= 16");
  }
  const std::size_t m = v.dimension();
  std::vector<std::vector<double>> members;
  for (const auto& u : A) {
    require_dimension(u.dimension(), m, "unanimity_oracle");
    if (!u.is_indifference()) members.emplace_back(u.values().begin(), u.values().end());
  }
  if (v.is_indifference() || m < 2) return true;

  const auto grid = sphere_grid(m, grid_resolution);
  const auto vv = v.values();
  std::vector<double> d(m);

  auto violates = [&](std::span<const double> delta) {
    if (dot(vv, delta) >= -kOracleViolation) return false;
    for (const auto& u : members) {
      if (dot(u, delta) < -kFeasibilitySlack) return false;
    }
    return true;
  };

  // Subsets of members whose constraints are made tight; the empty subset is
  // the plain grid.
  const std::size_t k = members.size();
  const std::size_t max_subset = std::min<std::size_t>(k, m >= 2 ? m - 2 : 0);
  std::vector<std::vector<std::size_t>> subsets{{}};
  if (k <= kMaxSubsetMembers) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << k); ++mask) {
      std::vector<std::size_t> s;
      for (std::size_t j = 0; j < k; ++j) {
        if (mask & (std::size_t{1} << j)) s.push_back(j);
      }
      if (s.size() <= max_subset) subsets.push_back(std::move(s));
    }
  } else {
    for (std::size_t j = 0; j < k && max_subset > 0; ++j) subsets.push_back({j});
  }

  for (const auto& subset : subsets) {
    std::vector<const std::vector<double>*> span_vectors;
    for (std::size_t j : subset) span_vectors.push_back(&members[j]);
    const auto q = orthonormalize(span_vectors);
    if (q.size() + 1 >= m && !subset.empty()) continue;  // complement in H is {0}
    for (const auto& g : grid) {
      std::copy(g.begin(), g.end(), d.begin());
      for (const auto& b : q) {
        const double c = dot(d, b);
        for (std::size_t i = 0; i < m; ++i) d[i] -= c * b[i];
      }
      const double len = norm(d);
      if (len < 1e-8) continue;
      for (double& x : d) x /= len;
      if (violates(d)) return false;
    }
  }
  return true;
}

}  // namespace utilgeo
