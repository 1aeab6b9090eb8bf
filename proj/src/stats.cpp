#include "utilgeo/stats.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "utilgeo/errors.hpp"
#include "utilgeo/numerics.hpp"

namespace utilgeo {

namespace {

constexpr double kDegenerateMean = 1e-12;
constexpr std::size_t kMaxChiSquareCandidates = 20;

std::vector<numerics::CompensatedSum> coordinate_sums(std::span<const UtilityPoint> pop,
                                                      std::size_t& counted) {
  counted = 0;
  std::vector<numerics::CompensatedSum> sums;
  for (const auto& x : pop) {
    if (x.is_indifference()) continue;
    if (sums.empty()) sums.resize(x.dimension());
    if (x.dimension() != sums.size()) {
      fail(ErrorCode::DimensionMismatch, "population mixes candidate counts");
    }
    for (std::size_t i = 0; i < sums.size(); ++i) sums[i].add(x[i]);
    ++counted;
  }
  return sums;
}

void check_center(const UtilityPoint& center, double radius) {
  if (center.is_indifference()) {
    fail(ErrorCode::IndifferencePoint, "ball center cannot be the indifference point");
  }
  if (!(radius > 0.0 && radius <= 3.14159265358979323846)) {
    fail(ErrorCode::InvalidArgument, "ball radius must lie in (0, pi]");
  }
}

}  // namespace

FacetCounts facet_histogram(std::span<const UtilityPoint> pop, double tie_tol) {
  FacetCounts counts;
  for (const auto& x : pop) {
    if (x.dimension() > kMaxEnumerableCandidates) {
      fail(ErrorCode::SizeLimit, "facet histograms are limited to m <= 8");
    }
    ++counts[to_order(x, tie_tol)];
  }
  return counts;
}

TestResult chi_square_uniformity(const FacetCounts& counts, std::size_t m) {
  if (m == 0) fail(ErrorCode::InvalidArgument, "m must be at least 1");
  if (m > kMaxChiSquareCandidates) fail(ErrorCode::SizeLimit, "m! too large for chi-square");
  std::size_t total = 0;
  for (const auto& [order, count] : counts) {
    if (order.candidates() != m) {
      fail(ErrorCode::DimensionMismatch, "order " + order.to_string() + " is not over m candidates");
    }
    if (!order.is_strict()) {
      fail(ErrorCode::NonStrictOrder, "chi-square keys must be strict, got " + order.to_string());
    }
    total += count;
  }
  if (total == 0) fail(ErrorCode::EmptyPopulation, "chi-square needs a positive total");
  const double cells = static_cast<double>(factorial(m));
  if (cells == 1.0) return {0.0, 1.0};
  const double expected = static_cast<double>(total) / cells;
  numerics::CompensatedSum statistic;
  for (const auto& [order, count] : counts) {
    const double d = static_cast<double>(count) - expected;
    statistic.add(d * d / expected);
  }
  // Orders never observed contribute (0 - E)^2 / E = E each.
  statistic.add((cells - static_cast<double>(counts.size())) * expected);
  const double chi2 = statistic.value();
  return {chi2, numerics::chi_square_upper_tail(chi2, cells - 1.0)};
}

double mean_resultant_length(std::span<const UtilityPoint> pop) {
  std::size_t counted = 0;
  const auto sums = coordinate_sums(pop, counted);
  if (counted == 0) fail(ErrorCode::EmptyPopulation, "no non-indifferent points");
  std::vector<double> mean(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) mean[i] = sums[i].value() / static_cast<double>(counted);
  return norm(mean);
}

MeanResultant mean_resultant(std::span<const UtilityPoint> pop) {
  std::size_t counted = 0;
  const auto sums = coordinate_sums(pop, counted);
  if (counted == 0) fail(ErrorCode::EmptyPopulation, "no non-indifferent points");
  std::vector<double> mean(sums.size());
  for (std::size_t i = 0; i < sums.size(); ++i) mean[i] = sums[i].value() / static_cast<double>(counted);
  const double length = norm(mean);
  if (length <= kDegenerateMean) {
    fail(ErrorCode::DegenerateMean, "mean resultant vanishes; direction undefined");
  }
  return {canonicalize(mean, 1e-300), std::min(length, 1.0)};
}

double ball_probability(std::span<const UtilityPoint> pop, const UtilityPoint& center,
                        double radius) {
  check_center(center, radius);
  std::size_t inside = 0;
  std::size_t counted = 0;
  for (const auto& x : pop) {
    if (x.is_indifference()) continue;
    ++counted;
    if (distance(x, center) <= radius) ++inside;
  }
  if (counted == 0) fail(ErrorCode::EmptyPopulation, "no non-indifferent points");
  return static_cast<double>(inside) / static_cast<double>(counted);
}

double empirical_density_ratio(std::span<const UtilityPoint> pop, const UtilityPoint& center,
                               double radius, std::span<const UtilityPoint> reference_pop) {
  const double reference = ball_probability(reference_pop, center, radius);
  if (reference == 0.0) {
    fail(ErrorCode::InfiniteRatio, "reference population has no point in the ball");
  }
  return ball_probability(pop, center, radius) / reference;
}

TestResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) fail(ErrorCode::EmptyPopulation, "KS test needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, numerics::kolmogorov_survival((ne + 0.12 + 0.11 / ne) * d)};
}

std::string stats_report(const Population& pop, const ReportOptions& options) {
  using nlohmann::ordered_json;
  ordered_json report = ordered_json::object();
  report["n"] = pop.size();

  std::size_t n_indifferent = 0;
  FacetCounts counts;
  std::vector<UtilityPoint> sphere;
  if (pop.ordinal) {
    for (const auto& o : pop.orders) {
      if (o.tiers().size() == 1) {
        ++n_indifferent;
      } else {
        ++counts[o];
      }
    }
  } else {
    for (const auto& x : pop.points) {
      if (x.is_indifference()) {
        ++n_indifferent;
      } else {
        sphere.push_back(x);
      }
    }
    counts = facet_histogram(sphere, options.tie_tol);
  }
  report["n_indifferent"] = n_indifferent;

  ordered_json facets = ordered_json::object();
  bool all_strict = true;
  for (const auto& [order, count] : counts) {
    facets[order.to_string()] = count;
    all_strict = all_strict && order.is_strict();
  }
  report["facets"] = facets;

  if (!counts.empty() && all_strict) {
    const auto chi = chi_square_uniformity(counts, pop.m);
    report["chi2"] = chi.statistic;
    report["p_value"] = chi.p_value;
  }
  if (!sphere.empty()) report["mean_resultant_length"] = mean_resultant_length(sphere);
  if (options.ball_center) {
    if (pop.ordinal) {
      fail(ErrorCode::InvalidArgument, "ball probability needs utility records, not orders");
    }
    if (options.ball_center->dimension() != pop.m && pop.size() > 0) {
      fail(ErrorCode::DimensionMismatch, "ball center has the wrong number of candidates");
    }
    report["ball_probability"] = ball_probability(sphere, *options.ball_center, options.ball_radius);
  }
  return report.dump();
}

}  // namespace utilgeo
