#include "evotransit/transition_state.hpp"

#include <bit>
#include <string>

#include "evotransit/error.hpp"

namespace evotransit {

namespace {

std::string shape(const Raster& r) { return std::to_string(r.width()) + "x" + std::to_string(r.height()); }

}  // namespace

TransitionState TransitionState::build(const Raster& start, const Raster& target) {
  if (!start.same_shape(target)) {
    throw Error(ErrorKind::DimensionMismatch, "start is " + shape(start) + ", target is " + shape(target));
  }
  TransitionState state(start.width(), start.height());
  const std::size_t cells = start.size();
  state.cells_.resize(cells);
  state.rank_of_.assign(cells, kNoRank);
  for (std::size_t i = 0; i < cells; ++i) {
    if (start[i] == target[i]) {
      state.cells_[i] = CellState::Fixed;
    } else {
      state.cells_[i] = CellState::S;
      state.rank_of_[i] = static_cast<std::uint32_t>(state.mutable_cells_.size());
      state.mutable_cells_.push_back(i);
    }
  }
  state.count_s_ = state.mutable_cells_.size();
  state.t_tree_.assign(state.mutable_cells_.size() + 1, 0);
  return state;
}

void TransitionState::fenwick_add(std::size_t rank, int delta) {
  for (std::size_t i = rank + 1; i < t_tree_.size(); i += i & (~i + 1)) {
    t_tree_[i] = static_cast<std::uint32_t>(static_cast<int>(t_tree_[i]) + delta);
  }
}

std::size_t TransitionState::nth_in_state(CellState state, std::size_t k) const {
  const std::size_t n = mutable_cells_.size();
  const bool want_t = state == CellState::T;
  if (state == CellState::Fixed || k >= (want_t ? count_t_ : count_s_)) {
    throw Error(ErrorKind::InvalidArgument, "rank " + std::to_string(k) + " out of range");
  }
  // Descend the tree; node i covers (i - lowbit(i), i].
  std::size_t pos = 0;
  std::size_t remaining = k;
  for (std::size_t step = std::bit_floor(n); step != 0; step >>= 1) {
    const std::size_t next = pos + step;
    if (next > n) continue;
    const std::size_t in_t = t_tree_[next];
    const std::size_t here = want_t ? in_t : step - in_t;
    if (here <= remaining) {
      pos = next;
      remaining -= here;
    }
  }
  return mutable_cells_[pos];
}

void TransitionState::set_cell(std::size_t cell, CellState to) {
  const CellState from = cells_[cell];
  if (from == CellState::Fixed || to == CellState::Fixed || from == to) {
    throw Error(ErrorKind::InvalidArgument, "flip of cell " + std::to_string(cell) + " does not change a mutable cell");
  }
  cells_[cell] = to;
  if (to == CellState::T) {
    --count_s_;
    ++count_t_;
    fenwick_add(rank_of_[cell], +1);
  } else {
    ++count_s_;
    --count_t_;
    fenwick_add(rank_of_[cell], -1);
  }
}

void TransitionState::apply(std::span<const Flip> flips) {
  for (const Flip& f : flips) set_cell(f.cell, f.to);
}

void TransitionState::revert(std::span<const Flip> flips) {
  for (auto it = flips.rbegin(); it != flips.rend(); ++it) set_cell(it->cell, opposite(it->to));
}

void TransitionState::assign(std::span<const CellState> by_rank) {
  if (by_rank.size() != mutable_cells_.size()) {
    throw Error(ErrorKind::InvalidArgument, "assignment length does not match mutable_total");
  }
  for (std::size_t r = 0; r < by_rank.size(); ++r) {
    const std::size_t cell = mutable_cells_[r];
    if (by_rank[r] == CellState::Fixed) throw Error(ErrorKind::InvalidArgument, "cannot assign Fixed");
    if (cells_[cell] != by_rank[r]) set_cell(cell, by_rank[r]);
  }
}

bool TransitionState::recount_matches() const {
  std::size_t s = 0;
  std::size_t t = 0;
  for (CellState c : cells_) {
    if (c == CellState::S) ++s;
    if (c == CellState::T) ++t;
  }
  if (s != count_s_ || t != count_t_ || s + t != mutable_cells_.size()) return false;
  // The tree root prefix must agree too.
  std::size_t tree_total = 0;
  for (std::size_t i = mutable_cells_.size(); i > 0; i -= i & (~i + 1)) tree_total += t_tree_[i];
  return tree_total == t;
}

std::size_t fitness(const TransitionState& state) noexcept { return state.count_t(); }

double fraction_complete(const TransitionState& state) {
  if (state.empty_mutable_set()) {
    throw Error(ErrorKind::EmptyMutableSet, "start and target are identical");
  }
  return static_cast<double>(state.count_t()) / static_cast<double>(state.mutable_total());
}

Raster render(const TransitionState& state, const Raster& start, const Raster& target) {
  if (!start.same_shape(target) || start.width() != state.width() || start.height() != state.height()) {
    throw Error(ErrorKind::DimensionMismatch, "state is " + std::to_string(state.width()) + "x" +
                                                  std::to_string(state.height()) + ", images are " + shape(start) +
                                                  " and " + shape(target));
  }
  Raster out = target;
  for (std::size_t cell : state.mutable_cells()) {
    if (state.at(cell) == CellState::S) out[cell] = start[cell];
  }
  return out;
}

}  // namespace evotransit
