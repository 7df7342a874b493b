#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "dheat/grid.hpp"
#include "dheat/linear_system.hpp"
#include "dheat/solver_types.hpp"

namespace dheat {

/// Dense (I - A) x = b form of a small problem, used as ground truth for
/// the iterative solvers. Diagonal entries are 1, off-diagonals are 0 or
/// -1/4 with at most 4 per row.
struct DenseSystem {
  int n = 0;
  std::vector<double> matrix;  ///< row-major n x n, holds (I - A)
  std::vector<double> rhs;
  std::vector<GridCell> ordering;  ///< Free-cell enumeration of the grid
};

inline DenseSystem build_dense_system(const LinearSystemView& view) {
  DenseSystem d;
  d.n = view.n_unknowns();
  const std::size_t n = static_cast<std::size_t>(d.n);
  d.matrix.assign(n * n, 0.0);
  d.rhs.assign(view.rhs().begin(), view.rhs().end());
  d.ordering.assign(view.cells().begin(), view.cells().end());
  for (int row = 0; row < d.n; ++row) {
    d.matrix[static_cast<std::size_t>(row) * n + row] = 1.0;
    for (const StencilEntry& e : view.row_entries(row)) {
      d.matrix[static_cast<std::size_t>(row) * n + e.col] = -e.weight;
    }
  }
  return d;
}

/// Gaussian elimination with partial pivoting. Desk-scale only: the
/// system is taken by value and eliminated in place; n is capped at 4096.
inline std::vector<double> dense_solve(DenseSystem system) {
  constexpr int kMaxUnknowns = 4096;
  if (system.n > kMaxUnknowns) {
    throw std::invalid_argument("dense_solve is limited to " +
                                std::to_string(kMaxUnknowns) +
                                " unknowns, got " + std::to_string(system.n));
  }
  const int n = system.n;
  const std::size_t ns = static_cast<std::size_t>(n);
  double* a = system.matrix.data();
  double* b = system.rhs.data();

  for (int k = 0; k < n; ++k) {
    int pivot = k;
    double best = std::fabs(a[static_cast<std::size_t>(k) * ns + k]);
    for (int r = k + 1; r < n; ++r) {
      const double cand = std::fabs(a[static_cast<std::size_t>(r) * ns + k]);
      if (cand > best) {
        best = cand;
        pivot = r;
      }
    }
    if (best == 0.0) {
      throw std::runtime_error("singular dense system (internal error)");
    }
    if (pivot != k) {
      for (int c = k; c < n; ++c) {
        std::swap(a[static_cast<std::size_t>(k) * ns + c],
                  a[static_cast<std::size_t>(pivot) * ns + c]);
      }
      std::swap(b[k], b[pivot]);
    }
    const double inv = 1.0 / a[static_cast<std::size_t>(k) * ns + k];
    for (int r = k + 1; r < n; ++r) {
      const double m = a[static_cast<std::size_t>(r) * ns + k] * inv;
      if (m == 0.0) continue;
      a[static_cast<std::size_t>(r) * ns + k] = 0.0;
      for (int c = k + 1; c < n; ++c) {
        a[static_cast<std::size_t>(r) * ns + c] -=
            m * a[static_cast<std::size_t>(k) * ns + c];
      }
      b[r] -= m * b[k];
    }
  }

  std::vector<double> x(ns, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double s = b[r];
    for (int c = r + 1; c < n; ++c) {
      s -= a[static_cast<std::size_t>(r) * ns + c] * x[c];
    }
    x[r] = s / a[static_cast<std::size_t>(r) * ns + r];
  }
  return x;
}

/// Solution vector written into a full-grid field (Fixed cells keep
/// their imposed values).
inline TemperatureField embed_solution(const GridProblem& problem,
                                       const LinearSystemView& view,
                                       const std::vector<double>& x) {
  TemperatureField field = TemperatureField::from_problem(problem);
  for (int row = 0; row < view.n_unknowns(); ++row) {
    const auto [cx, cy] = view.cell(row);
    field.at(cx, cy) = x[row];
  }
  return field;
}

/// Direct ground-truth field for a desk-scale problem.
inline TemperatureField oracle_field(const GridProblem& problem) {
  const LinearSystemView view = as_linear_system(problem);
  return embed_solution(problem, view, dense_solve(build_dense_system(view)));
}

struct FieldDiff {
  double max_abs = 0.0;
  double rms = 0.0;
};

/// Difference metrics over Free cells only. Throws on dimension mismatch.
inline FieldDiff compare_fields(const TemperatureField& a,
                                const TemperatureField& b,
                                const GridProblem& problem) {
  if (a.nx != b.nx || a.ny != b.ny || a.nx != problem.nx() ||
      a.ny != problem.ny()) {
    throw std::invalid_argument("field dimensions do not match");
  }
  FieldDiff diff;
  double sum_sq = 0.0;
  std::size_t count = 0;
  const auto kind = problem.kinds();
  for (std::size_t i = 0; i < kind.size(); ++i) {
    if (kind[i] != 0) continue;
    const double gap = std::fabs(a.values[i] - b.values[i]);
    if (gap > diff.max_abs) diff.max_abs = gap;
    sum_sq += gap * gap;
    ++count;
  }
  diff.rms = count > 0 ? std::sqrt(sum_sq / static_cast<double>(count)) : 0.0;
  return diff;
}

}  // namespace dheat
