#include "evotransit/mutation.hpp"

#include <algorithm>
#include <string>

#include "evotransit/error.hpp"

namespace evotransit {

namespace {

bool is_geometric(OperatorKind kind) {
  return kind == OperatorKind::Strip || kind == OperatorKind::CombinedStrip || kind == OperatorKind::Box;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw Error(ErrorKind::InvalidArgument, message);
}

// Bernoulli(p) over the mutable cells currently in `cls`, in rank order,
// by jumping geometric gaps. p >= 1 selects every cell without drawing.
void skip_sample(const TransitionState& state, CellState cls, std::size_t count, double p, Rng& rng,
                 std::vector<Flip>& out) {
  if (count == 0 || p <= 0.0) return;
  const CellState to = opposite(cls);
  if (p >= 1.0) {
    for (std::size_t k = 0; k < count; ++k) out.push_back({state.nth_in_state(cls, k), to});
    return;
  }
  std::uint64_t k = rng.geometric_gap(p);
  while (k < count) {
    out.push_back({state.nth_in_state(cls, k), to});
    const std::uint64_t gap = rng.geometric_gap(p);
    if (gap >= count) break;
    k += gap + 1;
  }
}

std::size_t anchor_range(std::size_t dim, std::size_t extent, AnchorMode mode) {
  if (mode == AnchorMode::Clip || extent >= dim) return mode == AnchorMode::Clip ? dim : 1;
  return dim - extent + 1;
}

}  // namespace

void OperatorSpec::validate() const {
  require(c_s >= 1.0, "c_s must be >= 1");
  require(c_t >= 1.0, "c_t must be >= 1");
  require(strip_length >= 1, "strip length must be >= 1");
  require(box_size >= 1, "box size must be >= 1");
  require(h_strip.width >= 1 && h_strip.height >= 1, "horizontal strip dimensions must be >= 1");
  require(v_strip.width >= 1 && v_strip.height >= 1, "vertical strip dimensions must be >= 1");
  if (kind == OperatorKind::Composite) {
    require(is_geometric(composite_partner), "composite partner must be strip, combined-strip or box");
    require(interleave.asymmetric >= 1 && interleave.partner >= 1, "interleave terms must be >= 1");
  }
}

std::size_t MutationDelta::s_to_t() const noexcept {
  return static_cast<std::size_t>(std::count_if(flips.begin(), flips.end(), [](const Flip& f) { return f.to == CellState::T; }));
}

std::size_t MutationDelta::t_to_s() const noexcept { return flips.size() - s_to_t(); }

MutationDelta inverse(const MutationDelta& delta) {
  MutationDelta inv{{}, delta.proposal_kind};
  inv.flips.reserve(delta.flips.size());
  for (auto it = delta.flips.rbegin(); it != delta.flips.rend(); ++it) inv.flips.push_back({it->cell, opposite(it->to)});
  return inv;
}

MutationDelta standard_mutation(const TransitionState& state, Rng& rng, Sampling sampling) {
  MutationDelta delta{{}, OperatorKind::Standard};
  const std::size_t total = state.mutable_total();
  if (total == 0) return delta;
  const double p = 1.0 / static_cast<double>(total);
  const auto cells = state.mutable_cells();
  if (sampling == Sampling::PerCell) {
    for (std::size_t cell : cells) {
      if (rng.uniform01() < p) delta.flips.push_back({cell, opposite(state.at(cell))});
    }
    return delta;
  }
  if (total == 1) {
    delta.flips.push_back({cells[0], opposite(state.at(cells[0]))});
    return delta;
  }
  std::uint64_t k = rng.geometric_gap(p);
  while (k < total) {
    delta.flips.push_back({cells[k], opposite(state.at(cells[k]))});
    const std::uint64_t gap = rng.geometric_gap(p);
    if (gap >= total) break;
    k += gap + 1;
  }
  return delta;
}

double asymmetric_s_probability(std::size_t count_s, double c_s) noexcept {
  return count_s == 0 ? 0.0 : std::min(1.0, c_s / (2.0 * static_cast<double>(count_s)));
}

double asymmetric_t_probability(std::size_t count_t, double c_t) noexcept {
  return count_t == 0 ? 0.0 : std::min(1.0, c_t / (2.0 * static_cast<double>(count_t)));
}

MutationDelta asymmetric_mutation(const TransitionState& state, double c_s, double c_t, Rng& rng, Sampling sampling) {
  MutationDelta delta{{}, OperatorKind::Asymmetric};
  if (state.mutable_total() == 0) return delta;
  const double p_s = asymmetric_s_probability(state.count_s(), c_s);
  const double p_t = asymmetric_t_probability(state.count_t(), c_t);
  if (sampling == Sampling::PerCell) {
    for (std::size_t cell : state.mutable_cells()) {
      const CellState now = state.at(cell);
      const double p = now == CellState::S ? p_s : p_t;
      if (rng.uniform01() < p) delta.flips.push_back({cell, opposite(now)});
    }
    return delta;
  }
  skip_sample(state, CellState::S, state.count_s(), p_s, rng, delta.flips);
  skip_sample(state, CellState::T, state.count_t(), p_t, rng, delta.flips);
  return delta;
}

MutationDelta region_delta(const TransitionState& state, PixelCoord anchor, Extent extent, GeometricMode mode) {
  MutationDelta delta;
  const std::size_t row_end = std::min(state.height(), anchor.row + extent.height);
  const std::size_t col_end = std::min(state.width(), anchor.col + extent.width);
  for (std::size_t r = anchor.row; r < row_end; ++r) {
    for (std::size_t c = anchor.col; c < col_end; ++c) {
      const std::size_t cell = state.index_of({r, c});
      const CellState now = state.at(cell);
      if (now == CellState::Fixed) continue;
      if (mode == GeometricMode::SetToTarget) {
        if (now == CellState::S) delta.flips.push_back({cell, CellState::T});
      } else {
        delta.flips.push_back({cell, opposite(now)});
      }
    }
  }
  return delta;
}

PixelCoord draw_anchor(const TransitionState& state, Extent extent, AnchorMode mode, Rng& rng) {
  PixelCoord anchor;
  anchor.row = rng.uniform_below(anchor_range(state.height(), extent.height, mode));
  anchor.col = rng.uniform_below(anchor_range(state.width(), extent.width, mode));
  return anchor;
}

MutationDelta strip_mutation(const TransitionState& state, std::size_t strip_length, Rng& rng, GeometricMode mode,
                             AnchorMode anchors) {
  const Extent extent{1, strip_length};
  MutationDelta delta = region_delta(state, draw_anchor(state, extent, anchors, rng), extent, mode);
  delta.proposal_kind = OperatorKind::Strip;
  return delta;
}

MutationDelta combined_strip_mutation(const TransitionState& state, Extent h_strip, Extent v_strip, Rng& rng,
                                      GeometricMode mode, AnchorMode anchors) {
  PixelCoord anchor;
  bool horizontal = false;
  if (anchors == AnchorMode::Clip) {
    anchor.row = rng.uniform_below(state.height());
    anchor.col = rng.uniform_below(state.width());
    horizontal = rng.uniform_below(2) == 0;
  } else {
    // Fitting an anchor needs the orientation first.
    horizontal = rng.uniform_below(2) == 0;
    anchor = draw_anchor(state, horizontal ? h_strip : v_strip, anchors, rng);
  }
  MutationDelta delta = region_delta(state, anchor, horizontal ? h_strip : v_strip, mode);
  delta.proposal_kind = OperatorKind::CombinedStrip;
  return delta;
}

MutationDelta box_mutation(const TransitionState& state, std::size_t box_size, Rng& rng, GeometricMode mode,
                           AnchorMode anchors) {
  const Extent extent{box_size, box_size};
  MutationDelta delta = region_delta(state, draw_anchor(state, extent, anchors, rng), extent, mode);
  delta.proposal_kind = OperatorKind::Box;
  return delta;
}

OperatorKind composite_next(std::uint64_t generation_index, OperatorKind partner, Interleave ratio) {
  const std::uint64_t block = std::uint64_t{ratio.asymmetric} + ratio.partner;
  return generation_index % block < ratio.asymmetric ? OperatorKind::Asymmetric : partner;
}

MutationDelta propose(const TransitionState& state, const OperatorSpec& spec, std::uint64_t generation_index,
                      Rng& rng) {
  OperatorKind kind = spec.kind;
  if (kind == OperatorKind::Composite) kind = composite_next(generation_index, spec.composite_partner, spec.interleave);
  switch (kind) {
    case OperatorKind::Standard: return standard_mutation(state, rng, spec.sampling);
    case OperatorKind::Asymmetric: return asymmetric_mutation(state, spec.c_s, spec.c_t, rng, spec.sampling);
    case OperatorKind::Strip: return strip_mutation(state, spec.strip_length, rng, spec.geometric_mode, spec.anchor_mode);
    case OperatorKind::CombinedStrip:
      return combined_strip_mutation(state, spec.h_strip, spec.v_strip, rng, spec.geometric_mode, spec.anchor_mode);
    case OperatorKind::Box: return box_mutation(state, spec.box_size, rng, spec.geometric_mode, spec.anchor_mode);
    case OperatorKind::Composite: break;
  }
  throw Error(ErrorKind::InvalidArgument, "composite partner cannot itself be composite");
}

std::string_view to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::Standard: return "standard";
    case OperatorKind::Asymmetric: return "asymmetric";
    case OperatorKind::Strip: return "strip";
    case OperatorKind::CombinedStrip: return "combined-strip";
    case OperatorKind::Box: return "box";
    case OperatorKind::Composite: return "composite";
  }
  return "unknown";
}

std::optional<OperatorKind> operator_kind_from_string(std::string_view name) {
  for (OperatorKind k : {OperatorKind::Standard, OperatorKind::Asymmetric, OperatorKind::Strip,
                         OperatorKind::CombinedStrip, OperatorKind::Box, OperatorKind::Composite}) {
    if (to_string(k) == name) return k;
  }
  return std::nullopt;
}

std::string_view to_string(Sampling sampling) {
  return sampling == Sampling::PerCell ? "per-cell" : "skip";
}

}  // namespace evotransit
