#pragma once

#include <cstdint>
#include <limits>

namespace evotransit {

/// Platform-independent pseudorandom stream: xoshiro256** seeded through
/// splitmix64. Every derived draw below is defined bit-for-bit here rather
/// than delegated to <random> distributions, whose output differs between
/// standard library implementations.
///
/// Draw order used by the operators:
///   - geometric operators: anchor row, anchor col, then orientation coin
///     (combined strip only);
///   - per-cell sampling: one uniform01() per mutable cell, row-major;
///   - geometric-skip sampling: one gap per selected cell plus one final
///     gap that runs past the end, S cells before T cells.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept { return next(); }
  result_type next() noexcept;

  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform01() noexcept;

  /// Uniform integer in [0, bound). bound must be nonzero. Lemire's
  /// multiply-and-reject, so the number of raw draws consumed is itself
  /// deterministic per seed.
  std::uint64_t uniform_below(std::uint64_t bound) noexcept;

  bool bernoulli(double p) noexcept { return uniform01() < p; }

  /// Number of failures before the first success of a Bernoulli(p) process,
  /// 0 < p < 1, by inversion of one uniform in (0, 1].
  std::uint64_t geometric_gap(double p) noexcept;

 private:
  std::uint64_t s_[4];
};

/// splitmix64 finalizer; used to derive independent per-trial seeds.
[[nodiscard]] std::uint64_t mix_seed(std::uint64_t value) noexcept;

[[nodiscard]] inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b = 0) noexcept {
  return mix_seed(mix_seed(mix_seed(base) ^ a) ^ (b * 0x9E3779B97F4A7C15ULL));
}

}  // namespace evotransit
