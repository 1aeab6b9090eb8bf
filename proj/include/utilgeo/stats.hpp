#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "utilgeo/cultures.hpp"
#include "utilgeo/geometry.hpp"
#include "utilgeo/ordinal.hpp"

namespace utilgeo {

using FacetCounts = std::map<PreferenceOrder, std::size_t>;

// Counts of to_order over the population. Orders with ties (including the
// indifference point's single tier) are counted under their own key.
FacetCounts facet_histogram(std::span<const UtilityPoint> pop,
                            double tie_tol = kDefaultTieTol);

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

// Pearson chi-square against equal probability for all m! strict orders.
// Orders absent from `counts` count as zero.
TestResult chi_square_uniformity(const FacetCounts& counts, std::size_t m);

struct MeanResultant {
  UtilityPoint direction;
  double length = 0.0;
};

// Mean of the canonical vectors of the non-indifferent members.
MeanResultant mean_resultant(std::span<const UtilityPoint> pop);

// Length of the mean resultant, defined even where the direction is not.
double mean_resultant_length(std::span<const UtilityPoint> pop);

// Fraction of non-indifferent members within `radius` of `center`.
double ball_probability(std::span<const UtilityPoint> pop, const UtilityPoint& center,
                        double radius);

double empirical_density_ratio(std::span<const UtilityPoint> pop, const UtilityPoint& center,
                               double radius, std::span<const UtilityPoint> reference_pop);

// Two-sample Kolmogorov-Smirnov test with the asymptotic p-value.
TestResult ks_two_sample(std::vector<double> a, std::vector<double> b);

struct ReportOptions {
  double tie_tol = kDefaultTieTol;
  std::optional<UtilityPoint> ball_center;
  double ball_radius = 0.0;
};

// JSON report: n, n_indifferent, facets, chi2, p_value,
// mean_resultant_length and, on request, ball_probability. Indifferent
// agents only contribute to n and n_indifferent.
std::string stats_report(const Population& pop, const ReportOptions& options);

}  // namespace utilgeo
