#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "evotransit/raster.hpp"

namespace evotransit {

// S: pixel shows the start image. T: pixel shows the target image.
// Fixed: start and target agree there, so the cell never takes part.
enum class CellState : std::uint8_t { S, T, Fixed };

[[nodiscard]] constexpr CellState opposite(CellState state) noexcept {
  return state == CellState::S ? CellState::T : CellState::S;
}

// One cell changing between S and T.
struct Flip {
  std::size_t cell = 0;
  CellState to = CellState::T;

  friend bool operator==(const Flip&, const Flip&) = default;
};

/// Per-pixel S/T state of an evolving image plus cached |X|_S and |X|_T.
///
/// Cells are addressed by their row-major index. Mutable cells are also
/// ranked in row-major order, which lets the sampling operators address
/// "the k-th cell currently in S" in O(log n) via a Fenwick tree over T
/// cells.
class TransitionState {
 public:
  /// Marks every differing pixel S and every equal pixel Fixed. Throws
  /// DimensionMismatch when the shapes differ. An all-equal pair yields a
  /// state with mutable_total() == 0 (see empty_mutable_set()).
  static TransitionState build(const Raster& start, const Raster& target);

  [[nodiscard]] std::size_t width() const noexcept { return width_; }
  [[nodiscard]] std::size_t height() const noexcept { return height_; }
  [[nodiscard]] std::size_t cell_count() const noexcept { return cells_.size(); }

  [[nodiscard]] std::size_t mutable_total() const noexcept { return mutable_cells_.size(); }
  [[nodiscard]] std::size_t count_s() const noexcept { return count_s_; }
  [[nodiscard]] std::size_t count_t() const noexcept { return count_t_; }
  [[nodiscard]] bool empty_mutable_set() const noexcept { return mutable_cells_.empty(); }
  [[nodiscard]] bool complete() const noexcept { return count_s_ == 0; }

  [[nodiscard]] CellState at(std::size_t cell) const { return cells_[cell]; }
  [[nodiscard]] CellState at(PixelCoord coord) const { return cells_[index_of(coord)]; }

  [[nodiscard]] PixelCoord coord_of(std::size_t cell) const noexcept { return {cell / width_, cell % width_}; }
  [[nodiscard]] std::size_t index_of(PixelCoord coord) const noexcept { return coord.row * width_ + coord.col; }

  // Mutable cell indices in row-major order.
  [[nodiscard]] std::span<const std::size_t> mutable_cells() const noexcept { return mutable_cells_; }

  /// Index of the k-th (0-based, row-major) mutable cell currently in
  /// `state`, which must be S or T. Requires k < count of that state.
  [[nodiscard]] std::size_t nth_in_state(CellState state, std::size_t k) const;

  /// Applies flips in order. Each flip must target a mutable cell and change it.
  void apply(std::span<const Flip> flips);
  /// Undoes flips previously passed to apply().
  void revert(std::span<const Flip> flips);

  /// Fresh recount of the grid against the cached counters.
  [[nodiscard]] bool recount_matches() const;

  /// Overwrites the S/T assignment of all mutable cells, in rank order.
  /// Used to seed states for experiments.
  void assign(std::span<const CellState> by_rank);

 private:
  TransitionState(std::size_t width, std::size_t height) : width_(width), height_(height) {}

  void set_cell(std::size_t cell, CellState to);
  void fenwick_add(std::size_t rank, int delta);

  static constexpr std::uint32_t kNoRank = UINT32_MAX;

  std::size_t width_;
  std::size_t height_;
  std::vector<CellState> cells_;
  std::vector<std::size_t> mutable_cells_;
  std::vector<std::uint32_t> rank_of_;
  // 1-based Fenwick tree over mutable ranks, counting cells in T.
  std::vector<std::uint32_t> t_tree_;
  std::size_t count_s_ = 0;
  std::size_t count_t_ = 0;
};

/// |X|_T over mutable cells.
[[nodiscard]] std::size_t fitness(const TransitionState& state) noexcept;

/// count_t / mutable_total. Throws EmptyMutableSet when nothing is mutable.
[[nodiscard]] double fraction_complete(const TransitionState& state);

/// Start pixels where the cell is S, target pixels elsewhere.
[[nodiscard]] Raster render(const TransitionState& state, const Raster& start, const Raster& target);

}  // namespace evotransit
