#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace dheat {

/// Grid geometry: number of points along x and y, frontier included.
/// A valid grid has nx >= 3 and ny >= 3 so that at least one interior
/// (non-frontier) cell exists. Cells are indexed (x, y) with
/// x in [0, nx-1], y in [0, ny-1]; the frontier is x in {0, nx-1} or
/// y in {0, ny-1}.
struct GridSpec {
  int nx = 0;
  int ny = 0;
};

/// An interior cell with an imposed temperature.
struct PinnedCell {
  int x = 0;
  int y = 0;
  double value = 0.0;
};

/// Dirichlet data: one constant temperature per frontier edge, plus
/// optional pinned cells strictly inside the frontier. Where two edges
/// meet (corners), x-edge values take precedence; corner cells are never
/// read by the interior stencil, so this matters only for serialization.
struct DirichletSpec {
  double edge_x0 = 0.0;  ///< temperature on the x = 0 edge
  double edge_x1 = 0.0;  ///< temperature on the x = nx-1 edge
  double edge_y0 = 0.0;  ///< temperature on the y = 0 edge
  double edge_y1 = 0.0;  ///< temperature on the y = ny-1 edge
  std::vector<PinnedCell> pins;
};

enum class CellKind : std::uint8_t { Free = 0, Fixed = 1 };

/// Discretized Dirichlet problem on a rectangular grid. Every cell is
/// either Fixed (frontier or pinned; holds an imposed temperature) or
/// Free (an unknown of the linear system). Each Free cell has exactly
/// four stencil neighbours, each of which is Free or Fixed.
///
/// Immutable after construction; safe to share across concurrent
/// solver runs.
class GridProblem {
 public:
  int nx() const { return grid_.nx; }
  int ny() const { return grid_.ny; }
  const GridSpec& grid() const { return grid_; }
  const DirichletSpec& dirichlet() const { return dirichlet_; }

  std::size_t cell_count() const { return kind_.size(); }
  std::size_t free_count() const { return free_count_; }

  /// Flat index of cell (x, y); y is the contiguous direction.
  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(grid_.ny) +
           static_cast<std::size_t>(y);
  }

  CellKind kind(int x, int y) const {
    return static_cast<CellKind>(kind_[index(x, y)]);
  }
  bool is_fixed(int x, int y) const { return kind_[index(x, y)] != 0; }

  /// Imposed temperature of a Fixed cell; 0 for Free cells.
  double fixed_value(int x, int y) const { return fixed_value_[index(x, y)]; }

  /// Per-cell classification, flat layout (0 = Free, 1 = Fixed).
  std::span<const std::uint8_t> kinds() const { return kind_; }
  /// Per-cell imposed temperatures (0 on Free cells), flat layout.
  std::span<const double> fixed_values() const { return fixed_value_; }

  friend GridProblem build_problem(const GridSpec&, const DirichletSpec&);

 private:
  GridProblem() = default;

  GridSpec grid_;
  DirichletSpec dirichlet_;
  std::vector<std::uint8_t> kind_;
  std::vector<double> fixed_value_;
  std::size_t free_count_ = 0;
};

/// Classifies cells and populates imposed temperatures.
/// Throws std::invalid_argument for grids without interior cells or for
/// out-of-range or duplicate pinned cells.
inline GridProblem build_problem(const GridSpec& grid,
                                 const DirichletSpec& dirichlet) {
  if (grid.nx < 3 || grid.ny < 3) {
    throw std::invalid_argument("grid must be at least 3x3 points, got " +
                                std::to_string(grid.nx) + "x" +
                                std::to_string(grid.ny));
  }

  GridProblem p;
  p.grid_ = grid;
  p.dirichlet_ = dirichlet;
  p.kind_.assign(static_cast<std::size_t>(grid.nx) * grid.ny, 0);
  p.fixed_value_.assign(p.kind_.size(), 0.0);

  for (int x = 0; x < grid.nx; ++x) {
    for (int y = 0; y < grid.ny; ++y) {
      if (x != 0 && x != grid.nx - 1 && y != 0 && y != grid.ny - 1) continue;
      const std::size_t i = p.index(x, y);
      p.kind_[i] = 1;
      if (x == 0) {
        p.fixed_value_[i] = dirichlet.edge_x0;
      } else if (x == grid.nx - 1) {
        p.fixed_value_[i] = dirichlet.edge_x1;
      } else if (y == 0) {
        p.fixed_value_[i] = dirichlet.edge_y0;
      } else {
        p.fixed_value_[i] = dirichlet.edge_y1;
      }
    }
  }

  for (const PinnedCell& pin : dirichlet.pins) {
    if (pin.x < 1 || pin.x > grid.nx - 2 || pin.y < 1 || pin.y > grid.ny - 2) {
      throw std::invalid_argument("pinned cell (" + std::to_string(pin.x) +
                                  ", " + std::to_string(pin.y) +
                                  ") is not strictly inside the frontier");
    }
    const std::size_t i = p.index(pin.x, pin.y);
    if (p.kind_[i] != 0) {
      throw std::invalid_argument("duplicate pinned cell (" +
                                  std::to_string(pin.x) + ", " +
                                  std::to_string(pin.y) + ")");
    }
    p.kind_[i] = 1;
    p.fixed_value_[i] = pin.value;
  }

  std::size_t free_cells = 0;
  for (std::uint8_t k : p.kind_) free_cells += (k == 0);
  p.free_count_ = free_cells;
  return p;
}

/// Closed form for problems with a single Free cell: the solution is the
/// mean of its four fixed neighbour temperatures. Throws if the problem
/// has any other number of Free cells.
inline double exact_solution_1cell(const GridProblem& problem) {
  if (problem.free_count() != 1) {
    throw std::invalid_argument("exact_solution_1cell needs exactly one Free "
                                "cell, problem has " +
                                std::to_string(problem.free_count()));
  }
  for (int x = 1; x < problem.nx() - 1; ++x) {
    for (int y = 1; y < problem.ny() - 1; ++y) {
      if (problem.is_fixed(x, y)) continue;
      return 0.25 * (problem.fixed_value(x - 1, y) +
                     problem.fixed_value(x + 1, y) +
                     problem.fixed_value(x, y - 1) +
                     problem.fixed_value(x, y + 1));
    }
  }
  throw std::logic_error("free cell not found");
}

}  // namespace dheat
