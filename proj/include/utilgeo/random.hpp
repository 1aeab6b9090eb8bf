#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace utilgeo {

// Deterministic xoshiro256** stream seeded through SplitMix64. Bit-identical
// on every platform: only integer arithmetic plus std::log/std::sqrt in the
// derived draws.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  // Independent stream for agent `index` of a run with master `seed`. Used so
  // that a population is the same whatever the worker count.
  static RandomStream substream(std::uint64_t seed, std::uint64_t index);

  std::uint64_t next_u64() noexcept;

  // Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept;

  // Standard normal by the Marsaglia polar method.
  double normal() noexcept;

  std::vector<double> normals(std::size_t n);

 private:
  std::array<std::uint64_t, 4> state_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state) noexcept;

}  // namespace utilgeo
