#pragma once

#include <cstdint>
#include <string_view>

namespace dtwin {

/// Deterministic 64-bit generator (xoshiro256**). Seeded through SplitMix64 so
/// that every seed, including 0, yields a valid state. The output sequence is
/// fully specified, unlike std:: distributions, which keeps runs bitwise
/// reproducible across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  bool bernoulli(double prob) { return uniform() < prob; }

 private:
  std::uint64_t s_[4];
};

std::uint64_t splitmix64(std::uint64_t x);

/// Independent stream seed for a named pipeline stage. Streams are keyed by
/// (master, stage, index) only, so adding a stage never shifts another one.
std::uint64_t stage_seed(std::uint64_t master, std::string_view stage,
                         std::uint64_t index = 0);

}  // namespace dtwin
