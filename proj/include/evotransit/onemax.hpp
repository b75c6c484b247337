#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "evotransit/mutation.hpp"
#include "evotransit/rng.hpp"

// Bitstring (1+1) EA on OneMax. Bit value 0 plays the role of a pixel in
// S, 1 a pixel in T. The lab is written independently of the image
// engine, but consumes random draws in the same documented order, so the
// two can be checked against each other under shared seeds.
namespace evotransit::onemax {

enum class LabOperator { Standard, Asymmetric };

struct LabOperatorSpec {
  LabOperator kind = LabOperator::Asymmetric;
  double c_s = 1.0;
  double c_t = 1.0;
  Sampling sampling = Sampling::GeometricSkip;
};

[[nodiscard]] std::string to_string(const LabOperatorSpec& spec);

class BitInstance {
 public:
  /// All zeros.
  explicit BitInstance(std::size_t n);

  [[nodiscard]] std::size_t n() const noexcept { return n_; }
  [[nodiscard]] std::size_t ones() const noexcept { return ones_; }
  [[nodiscard]] std::size_t zeros() const noexcept { return n_ - ones_; }
  [[nodiscard]] bool bit(std::size_t i) const noexcept { return (words_[i / 64] >> (i % 64)) & 1U; }

  void flip(std::size_t i) noexcept;

  /// Position of the k-th (0-based) zero / one, scanning words.
  [[nodiscard]] std::size_t nth_zero(std::size_t k) const;
  [[nodiscard]] std::size_t nth_one(std::size_t k) const;

  [[nodiscard]] std::size_t popcount() const noexcept;

 private:
  std::size_t n_;
  std::size_t ones_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Positions the operator would flip, zeros before ones in skip mode.
[[nodiscard]] std::vector<std::size_t> propose_flips(const BitInstance& x, const LabOperatorSpec& spec, Rng& rng);

/// Change in the number of ones if `flips` were applied.
[[nodiscard]] std::int64_t gain_of(const BitInstance& x, std::span<const std::size_t> flips) noexcept;

inline constexpr std::uint64_t kSafetyCap = 1'000'000'000;

struct Trace {
  std::uint64_t generations = 0;
  std::vector<bool> accepted;
};

/// Generations until all-ones starting from all-zeros. Throws
/// SafetyCapExceeded after `cap` generations.
std::uint64_t run_to_optimum(std::size_t n, const LabOperatorSpec& spec, std::uint64_t seed,
                             std::uint64_t cap = kSafetyCap);

/// As run_to_optimum, also recording every accept/reject decision.
Trace run_to_optimum_traced(std::size_t n, const LabOperatorSpec& spec, std::uint64_t seed,
                            std::uint64_t cap = kSafetyCap);

enum class Model { Linear, NLogN };

[[nodiscard]] std::string_view to_string(Model model);

struct ScalingRow {
  std::size_t n = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<std::uint64_t> generations;
  double mean = 0.0;
  double stddev = 0.0;
  // Mean after dropping the top and bottom 10% of runs.
  double trimmed_mean = 0.0;
};

struct ModelFit {
  double coefficient = 0.0;
  // Sum of squared relative residuals (trimmed_mean - c*x) / trimmed_mean.
  double residual = 0.0;
};

struct ScalingResult {
  LabOperatorSpec op;
  std::vector<ScalingRow> rows;
  // False when fewer than two usable n values were given; the fields
  // below are then left empty / zero.
  bool sufficient_points = false;
  // trimmed_mean[i+1] / trimmed_mean[i].
  std::vector<double> doubling_ratios;
  ModelFit linear;
  ModelFit nlogn;
  Model better = Model::Linear;
};

inline constexpr std::size_t kMinRepeats = 30;

/// `repeats` independent runs per n (seeds derived from `seed`, n and
/// repeat index), fitted against c*n and c*n*ln(n). Requires strictly
/// increasing n_list and repeats >= kMinRepeats. threads = 0 uses
/// thread_budget().
ScalingResult scaling_experiment(const LabOperatorSpec& spec, std::span<const std::size_t> n_list, std::size_t repeats,
                                 std::uint64_t seed, std::size_t threads = 0);

/// Columns: operator,n,repeat,seed,generations
void write_scaling_csv(const ScalingResult& result, std::ostream& out);

struct DriftPoint {
  std::size_t k = 0;
  std::size_t samples = 0;
  // Mean one-step fitness gain, counting rejected proposals as zero.
  double mean_gain = 0.0;
  double std_error = 0.0;
  double improve_probability = 0.0;
};

/// For each k, a state with exactly k zeros at seeded random positions is
/// built and `samples` proposals are evaluated against it without moving.
std::vector<DriftPoint> drift_experiment(std::size_t n, std::span<const std::size_t> k_list,
                                         const LabOperatorSpec& spec, std::size_t samples, std::uint64_t seed,
                                         std::size_t threads = 0);

}  // namespace evotransit::onemax
