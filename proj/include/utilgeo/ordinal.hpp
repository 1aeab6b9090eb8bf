#pragma once

#include <compare>
#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "utilgeo/geometry.hpp"

namespace utilgeo {

inline constexpr double kDefaultTieTol = 1e-9;
inline constexpr std::size_t kMaxEnumerableCandidates = 8;

// Ranking with ties: an ordered partition of the candidates {0..m-1}, most
// preferred tier first. Candidates inside a tier are kept ascending.
class PreferenceOrder {
 public:
  using Tier = std::vector<std::size_t>;

  explicit PreferenceOrder(std::vector<Tier> tiers);

  // Strict order from a ranking, most preferred candidate first.
  static PreferenceOrder strict(std::span<const std::size_t> ranking);

  // Parses "1>4>2=3" (1-based labels).
  static PreferenceOrder parse(std::string_view text);

  std::size_t candidates() const noexcept { return m_; }
  const std::vector<Tier>& tiers() const noexcept { return tiers_; }
  bool is_strict() const noexcept { return tiers_.size() == m_; }

  // Candidates from most to least preferred; requires a strict order.
  std::vector<std::size_t> ranking() const;

  // "1>4>2=3" (1-based labels).
  std::string to_string() const;

  PreferenceOrder relabel(std::span<const std::size_t> perm) const;
  PreferenceOrder reversed() const;

  friend bool operator==(const PreferenceOrder&, const PreferenceOrder&) = default;
  friend auto operator<=>(const PreferenceOrder& a, const PreferenceOrder& b) {
    return a.tiers_ <=> b.tiers_;
  }

 private:
  std::size_t m_ = 0;
  std::vector<Tier> tiers_;
};

enum class CellKind { Facet, Edge, Vertex, Other };

const char* to_string(CellKind kind) noexcept;

PreferenceOrder to_order(const UtilityPoint& x, double tie_tol = kDefaultTieTol);

CellKind cell_kind(const PreferenceOrder& order);

// Number of discordant candidate pairs between two strict orders.
std::size_t kendall_tau(const PreferenceOrder& a, const PreferenceOrder& b);

// All m! strict orders, lexicographic in their ranking representation.
std::vector<PreferenceOrder> enumerate_strict_orders(std::size_t m);

std::size_t factorial(std::size_t n);

}  // namespace utilgeo
