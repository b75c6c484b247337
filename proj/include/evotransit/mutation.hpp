#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "evotransit/rng.hpp"
#include "evotransit/transition_state.hpp"

namespace evotransit {

enum class OperatorKind { Standard, Asymmetric, Strip, CombinedStrip, Box, Composite };

// How the per-pixel operators realize their independent Bernoulli flips.
// PerCell spends one draw per mutable cell and is the reproducible
// default. GeometricSkip jumps between selected cells and is meant for
// large experiments; it draws differently, so runs in the two modes are
// not comparable draw for draw.
enum class Sampling { PerCell, GeometricSkip };

// Geometric operators either set covered cells to T or toggle them.
enum class GeometricMode { SetToTarget, Toggle };

// Clip: anchors over every pixel, regions cut at the border.
// Fit: anchors restricted so the region lies inside the image when it can.
enum class AnchorMode { Clip, Fit };

struct Extent {
  std::size_t width = 1;
  std::size_t height = 1;

  friend bool operator==(const Extent&, const Extent&) = default;
};

// Within each block of asymmetric + partner generations, the first
// `asymmetric` use asymmetric mutation and the rest use the partner.
struct Interleave {
  std::uint32_t asymmetric = 1;
  std::uint32_t partner = 1;

  friend bool operator==(const Interleave&, const Interleave&) = default;
};

struct OperatorSpec {
  OperatorKind kind = OperatorKind::Asymmetric;
  double c_s = 100.0;
  double c_t = 50.0;
  std::size_t strip_length = 180;
  Extent h_strip{200, 40};
  Extent v_strip{1, 200};
  std::size_t box_size = 3;
  OperatorKind composite_partner = OperatorKind::Strip;
  Interleave interleave;
  Sampling sampling = Sampling::PerCell;
  GeometricMode geometric_mode = GeometricMode::SetToTarget;
  AnchorMode anchor_mode = AnchorMode::Clip;

  /// Throws InvalidArgument on c_s < 1, c_t < 1, zero sizes, a composite
  /// partner that is not geometric, or a zero interleave term.
  void validate() const;
};

struct MutationDelta {
  std::vector<Flip> flips;
  OperatorKind proposal_kind = OperatorKind::Standard;

  [[nodiscard]] std::size_t s_to_t() const noexcept;
  [[nodiscard]] std::size_t t_to_s() const noexcept;
  // Offspring fitness minus parent fitness.
  [[nodiscard]] std::int64_t fitness_change() const noexcept {
    return static_cast<std::int64_t>(s_to_t()) - static_cast<std::int64_t>(t_to_s());
  }
};

[[nodiscard]] MutationDelta inverse(const MutationDelta& delta);

/// Toggles each mutable cell with probability 1/mutable_total.
MutationDelta standard_mutation(const TransitionState& state, Rng& rng, Sampling sampling = Sampling::PerCell);

/// Toggles S cells with probability min(1, c_s / (2 count_s)) and T cells
/// with probability min(1, c_t / (2 count_t)); an empty class is skipped.
MutationDelta asymmetric_mutation(const TransitionState& state, double c_s, double c_t, Rng& rng,
                                  Sampling sampling = Sampling::PerCell);

[[nodiscard]] double asymmetric_s_probability(std::size_t count_s, double c_s) noexcept;
[[nodiscard]] double asymmetric_t_probability(std::size_t count_t, double c_t) noexcept;

/// Cells of the rectangle at `anchor` with size `extent`, clipped to the
/// image, that the operator changes. Fixed cells are skipped; in
/// SetToTarget mode cells already in T are skipped too.
MutationDelta region_delta(const TransitionState& state, PixelCoord anchor, Extent extent,
                           GeometricMode mode = GeometricMode::SetToTarget);

/// Draws an anchor for a region of the given extent (row first, then col).
PixelCoord draw_anchor(const TransitionState& state, Extent extent, AnchorMode mode, Rng& rng);

MutationDelta strip_mutation(const TransitionState& state, std::size_t strip_length, Rng& rng,
                             GeometricMode mode = GeometricMode::SetToTarget, AnchorMode anchors = AnchorMode::Clip);

MutationDelta combined_strip_mutation(const TransitionState& state, Extent h_strip, Extent v_strip, Rng& rng,
                                      GeometricMode mode = GeometricMode::SetToTarget,
                                      AnchorMode anchors = AnchorMode::Clip);

MutationDelta box_mutation(const TransitionState& state, std::size_t box_size, Rng& rng,
                           GeometricMode mode = GeometricMode::SetToTarget, AnchorMode anchors = AnchorMode::Clip);

/// Concrete operator used at a 0-based generation index by the composite
/// schedule. Deterministic; consumes no random draws.
[[nodiscard]] OperatorKind composite_next(std::uint64_t generation_index, OperatorKind partner, Interleave ratio);

/// One proposal from `spec` for the given 0-based generation index.
MutationDelta propose(const TransitionState& state, const OperatorSpec& spec, std::uint64_t generation_index,
                      Rng& rng);

[[nodiscard]] std::string_view to_string(OperatorKind kind);
[[nodiscard]] std::optional<OperatorKind> operator_kind_from_string(std::string_view name);
[[nodiscard]] std::string_view to_string(Sampling sampling);

}  // namespace evotransit
