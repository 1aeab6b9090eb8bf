#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "utilgeo/geometry.hpp"
#include "utilgeo/ordinal.hpp"
#include "utilgeo/random.hpp"

namespace utilgeo {

enum class CultureKind { Uniform, VMF, Mallows };

const char* to_string(CultureKind kind) noexcept;
CultureKind parse_culture_kind(const std::string& text);

using Pole = std::variant<std::monostate, UtilityPoint, PreferenceOrder>;

struct CultureSpec {
  CultureKind kind = CultureKind::Uniform;
  std::size_t m = 2;
  double kappa = 0.0;
  Pole pole;
  double indifference_prob = 0.0;
  std::uint64_t seed = 0;

  // Throws InvalidSpec (or SizeLimit for Mallows with m > 8).
  void validate() const;

  const UtilityPoint& pole_point() const;
  const PreferenceOrder& pole_order() const;

  // JSON object with keys kind, m, kappa, pole, indifference_prob, seed. A
  // VMF pole is written as its canonical vector, a Mallows pole as "1>2>3".
  std::string to_json() const;
  // Accepts any raw utility vector as VMF pole and canonicalizes it.
  static CultureSpec from_json(const std::string& text);
};

UtilityPoint sample_uniform(std::size_t m, RandomStream& stream);

UtilityPoint sample_vmf(const CultureSpec& spec, RandomStream& stream);

// log C_kappa, where C_kappa normalizes e^{kappa <u, u0>} against the uniform
// probability measure on the unit sphere of H.
double vmf_log_normalizer(std::size_t m, double kappa);

double vmf_log_density(const UtilityPoint& u, const CultureSpec& spec);

// Exact Mallows draw (Kendall tau) by repeated insertion.
PreferenceOrder sample_mallows(const CultureSpec& spec, RandomStream& stream);

// Exact Mallows draw by inverting the enumerated pmf.
PreferenceOrder sample_mallows_enumerated(const CultureSpec& spec, RandomStream& stream);

// The same sampler with the cumulative table over all m! orders built once.
class EnumeratedMallows {
 public:
  explicit EnumeratedMallows(const CultureSpec& spec);
  PreferenceOrder draw(RandomStream& stream) const;

 private:
  std::vector<PreferenceOrder> orders_;
  std::vector<double> cumulative_;
};

double mallows_pmf(const PreferenceOrder& sigma, const CultureSpec& spec);

// Sampler with the per-spec setup (bases, Wood constants, insertion weights)
// done once. draw() consumes one indifference Bernoulli then the culture
// draw from the given stream.
class Culture {
 public:
  explicit Culture(CultureSpec spec);

  const CultureSpec& spec() const noexcept { return spec_; }

  UtilityPoint draw_point(RandomStream& stream) const;
  PreferenceOrder draw_order(RandomStream& stream) const;

 private:
  UtilityPoint draw_vmf(RandomStream& stream) const;

  CultureSpec spec_;
  std::vector<std::vector<double>> pole_basis_;
  double wood_b_ = 0.0;
  double wood_x0_ = 0.0;
  double wood_c_ = 0.0;
};

// Sampled agents. Utility cultures fill `points`; Mallows fills `orders`
// (an indifferent agent is the single-tier order).
struct Population {
  std::size_t m = 0;
  bool ordinal = false;
  std::vector<UtilityPoint> points;
  std::vector<PreferenceOrder> orders;

  std::size_t size() const noexcept { return ordinal ? orders.size() : points.size(); }
};

// Agent i draws from RandomStream::substream(spec.seed, i), so the output
// does not depend on `threads`.
Population sample_population(const CultureSpec& spec, std::size_t n,
                             std::size_t threads = 1);

}  // namespace utilgeo
