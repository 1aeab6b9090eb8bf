#include "utilgeo/ordinal.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "utilgeo/errors.hpp"

namespace utilgeo {

PreferenceOrder::PreferenceOrder(std::vector<Tier> tiers) : tiers_(std::move(tiers)) {
  if (tiers_.empty()) fail(ErrorCode::InvalidArgument, "order needs at least one tier");
  for (const auto& tier : tiers_) {
    if (tier.empty()) fail(ErrorCode::InvalidArgument, "order has an empty tier");
    m_ += tier.size();
  }
  std::vector<bool> seen(m_, false);
  for (auto& tier : tiers_) {
    std::sort(tier.begin(), tier.end());
    for (std::size_t c : tier) {
      if (c >= m_ || seen[c]) {
        fail(ErrorCode::InvalidArgument, "tiers do not partition the candidates");
      }
      seen[c] = true;
    }
  }
}

PreferenceOrder PreferenceOrder::strict(std::span<const std::size_t> ranking) {
  std::vector<Tier> tiers;
  tiers.reserve(ranking.size());
  for (std::size_t c : ranking) tiers.push_back({c});
  return PreferenceOrder(std::move(tiers));
}

PreferenceOrder PreferenceOrder::parse(std::string_view raw) {
  std::string compact;
  for (char c : raw) {
    if (c != ' ' && c != '\t') compact += c;
  }
  const std::string_view text = compact;
  std::vector<Tier> tiers(1);
  std::size_t pos = 0;
  while (true) {
    std::size_t label = 0;
    const auto* begin = text.data() + pos;
    const auto* end = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(begin, end, label);
    if (ec != std::errc() || label == 0) {
      fail(ErrorCode::Parse, "bad order string '" + std::string(raw) + "'");
    }
    tiers.back().push_back(label - 1);
    pos = static_cast<std::size_t>(ptr - text.data());
    if (pos == text.size()) break;
    const char sep = text[pos++];
    if (sep == '>') {
      tiers.emplace_back();
    } else if (sep != '=') {
      fail(ErrorCode::Parse, "bad separator in order string '" + std::string(raw) + "'");
    }
  }
  try {
    return PreferenceOrder(std::move(tiers));
  } catch (const Error& e) {
    fail(ErrorCode::Parse, "order string '" + std::string(raw) + "': " + e.what());
  }
}

std::vector<std::size_t> PreferenceOrder::ranking() const {
  if (!is_strict()) fail(ErrorCode::NonStrictOrder, "order " + to_string() + " has ties");
  std::vector<std::size_t> r;
  r.reserve(m_);
  for (const auto& tier : tiers_) r.push_back(tier.front());
  return r;
}

std::string PreferenceOrder::to_string() const {
  std::string out;
  for (std::size_t t = 0; t < tiers_.size(); ++t) {
    if (t > 0) out += '>';
    for (std::size_t k = 0; k < tiers_[t].size(); ++k) {
      if (k > 0) out += '=';
      out += std::to_string(tiers_[t][k] + 1);
    }
  }
  return out;
}

PreferenceOrder PreferenceOrder::relabel(std::span<const std::size_t> perm) const {
  check_permutation(perm, m_);
  std::vector<Tier> tiers = tiers_;
  for (auto& tier : tiers) {
    for (auto& c : tier) c = perm[c];
  }
  return PreferenceOrder(std::move(tiers));
}

PreferenceOrder PreferenceOrder::reversed() const {
  return PreferenceOrder(std::vector<Tier>(tiers_.rbegin(), tiers_.rend()));
}

const char* to_string(CellKind kind) noexcept {
  switch (kind) {
    case CellKind::Facet: return "Facet";
    case CellKind::Edge: return "Edge";
    case CellKind::Vertex: return "Vertex";
    case CellKind::Other: return "Other";
  }
  return "Other";
}

PreferenceOrder to_order(const UtilityPoint& x, double tie_tol) {
  if (!(tie_tol >= 0.0)) fail(ErrorCode::InvalidArgument, "tie_tol must be >= 0");
  const std::size_t m = x.dimension();
  std::vector<std::size_t> idx(m);
  std::iota(idx.begin(), idx.end(), 0);
  if (x.is_indifference()) return PreferenceOrder({idx});

  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return x[a] > x[b]; });
  // Neighbours in sorted order within tie_tol chain into one tier, which is
  // the transitive closure of pairwise closeness.
  std::vector<PreferenceOrder::Tier> tiers{{idx[0]}};
  for (std::size_t k = 1; k < m; ++k) {
    if (x[idx[k - 1]] - x[idx[k]] <= tie_tol) {
      tiers.back().push_back(idx[k]);
    } else {
      tiers.push_back({idx[k]});
    }
  }
  return PreferenceOrder(std::move(tiers));
}

CellKind cell_kind(const PreferenceOrder& order) {
  const std::size_t tiers = order.tiers().size();
  const std::size_t m = order.candidates();
  if (tiers == 1) return CellKind::Other;
  if (tiers == m) return CellKind::Facet;
  if (m == 4 && tiers == 3) return CellKind::Edge;
  if (m == 4 && tiers == 2) return CellKind::Vertex;
  return CellKind::Other;
}

std::size_t kendall_tau(const PreferenceOrder& a, const PreferenceOrder& b) {
  if (a.candidates() != b.candidates()) {
    fail(ErrorCode::DimensionMismatch, "orders over different candidate counts");
  }
  const auto ra = a.ranking();
  const auto rb = b.ranking();
  const std::size_t m = ra.size();
  std::vector<std::size_t> position_in_b(m);
  for (std::size_t k = 0; k < m; ++k) position_in_b[rb[k]] = k;
  std::size_t discordant = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (position_in_b[ra[i]] > position_in_b[ra[j]]) ++discordant;
    }
  }
  return discordant;
}

std::size_t factorial(std::size_t n) {
  std::size_t f = 1;
  for (std::size_t k = 2; k <= n; ++k) f *= k;
  return f;
}

std::vector<PreferenceOrder> enumerate_strict_orders(std::size_t m) {
  if (m == 0) fail(ErrorCode::InvalidArgument, "m must be at least 1");
  if (m > kMaxEnumerableCandidates) {
    fail(ErrorCode::SizeLimit, "enumeration is limited to m <= 8");
  }
  std::vector<std::size_t> ranking(m);
  std::iota(ranking.begin(), ranking.end(), 0);
  std::vector<PreferenceOrder> out;
  out.reserve(factorial(m));
  do {
    out.push_back(PreferenceOrder::strict(ranking));
  } while (std::next_permutation(ranking.begin(), ranking.end()));
  return out;
}

}  // namespace utilgeo
