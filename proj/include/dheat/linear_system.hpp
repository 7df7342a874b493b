#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "dheat/grid.hpp"

namespace dheat {

struct StencilEntry {
  int col = 0;          ///< Free-cell index of the neighbour
  double weight = 0.0;  ///< always exactly 0.25
};

struct GridCell {
  int x = 0;
  int y = 0;
};

/// The problem in fixed-point form x = A x + b over the Free cells.
/// A is substochastic: every row holds between 0 and 4 entries of weight
/// exactly 1/4, and rows of cells adjacent to Fixed cells sum to < 1.
/// b(i) = 1/4 * sum of the Fixed neighbour temperatures of cell i.
///
/// Immutable after construction.
class LinearSystemView {
 public:
  int n_unknowns() const { return static_cast<int>(rhs_.size()); }

  std::span<const StencilEntry> row_entries(int row) const {
    return std::span<const StencilEntry>(entries_.data() + row_offsets_[row],
                                         row_offsets_[row + 1] -
                                             row_offsets_[row]);
  }

  double rhs(int row) const { return rhs_[row]; }
  std::span<const double> rhs() const { return rhs_; }

  /// Grid coordinates of a Free-cell index (the flattening order).
  const GridCell& cell(int row) const { return cells_[row]; }
  std::span<const GridCell> cells() const { return cells_; }

  /// Free-cell index of grid cell (x, y), or -1 if the cell is Fixed.
  int free_index(int x, int y) const {
    return free_index_[static_cast<std::size_t>(x) * ny_ + y];
  }

  friend LinearSystemView as_linear_system(const GridProblem&);

 private:
  LinearSystemView() = default;

  int ny_ = 0;
  std::vector<std::size_t> row_offsets_;
  std::vector<StencilEntry> entries_;
  std::vector<double> rhs_;
  std::vector<GridCell> cells_;
  std::vector<int> free_index_;
};

/// Builds the fixed-point system for a problem. Free cells are enumerated
/// in sweep order (x ascending outer, y ascending inner).
inline LinearSystemView as_linear_system(const GridProblem& problem) {
  const int nx = problem.nx();
  const int ny = problem.ny();

  LinearSystemView sys;
  sys.ny_ = ny;
  sys.free_index_.assign(problem.cell_count(), -1);
  sys.cells_.reserve(problem.free_count());

  int next = 0;
  for (int x = 1; x < nx - 1; ++x) {
    for (int y = 1; y < ny - 1; ++y) {
      if (problem.is_fixed(x, y)) continue;
      sys.free_index_[problem.index(x, y)] = next++;
      sys.cells_.push_back({x, y});
    }
  }

  const int n = next;
  sys.rhs_.assign(n, 0.0);
  sys.row_offsets_.assign(n + 1, 0);
  sys.entries_.reserve(static_cast<std::size_t>(n) * 4);

  for (int row = 0; row < n; ++row) {
    const auto [x, y] = sys.cells_[row];
    sys.row_offsets_[row] = sys.entries_.size();
    const GridCell neighbours[4] = {{x - 1, y}, {x + 1, y}, {x, y - 1},
                                    {x, y + 1}};
    double b = 0.0;
    for (const auto& [nbx, nby] : neighbours) {
      if (problem.is_fixed(nbx, nby)) {
        b += problem.fixed_value(nbx, nby);
      } else {
        sys.entries_.push_back({sys.free_index_[problem.index(nbx, nby)],
                                0.25});
      }
    }
    sys.rhs_[row] = 0.25 * b;
  }
  sys.row_offsets_[n] = sys.entries_.size();
  return sys;
}

}  // namespace dheat
