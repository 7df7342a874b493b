#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

#include "dheat/grid.hpp"
#include "dheat/solver_types.hpp"

namespace dheat {

struct GsCycleResult {
  double max_change = 0.0;
  std::int64_t collections = 0;
};

/// One full in-place sweep (x ascending outer, y ascending inner): every
/// Free cell is replaced by the average of its four neighbours' current
/// values. Returns the largest absolute change and the number of
/// collection operations (= number of Free cells).
inline GsCycleResult gs_cycle(TemperatureField& field,
                              const GridProblem& problem) {
  const int nx = problem.nx();
  const int ny = problem.ny();
  const auto kind = problem.kinds();
  double* t = field.values.data();

  GsCycleResult result;
  for (int x = 1; x < nx - 1; ++x) {
    const std::size_t row = static_cast<std::size_t>(x) * ny;
    for (int y = 1; y < ny - 1; ++y) {
      const std::size_t i = row + y;
      if (kind[i] != 0) continue;
      const double updated = 0.25 * (t[i - ny] + t[i - 1] + t[i + ny] + t[i + 1]);
      const double change = std::fabs(updated - t[i]);
      if (change > result.max_change) result.max_change = change;
      t[i] = updated;
      ++result.collections;
    }
  }
  return result;
}

/// Runs gs_cycle until the per-cycle maximum change drops below
/// config.epsilon or config.max_cycles is reached. The final cycle (the
/// one whose change is below epsilon) is included in both the cycle and
/// collection counts. Non-convergence within the cap is reported via
/// converged = false, not an error.
inline SolveReport gs_solve(const GridProblem& problem,
                            const SolveConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  // Free cells per column; a cycle contributes this many collections at
  // each y (handles pinned cells).
  std::vector<std::int64_t> free_per_y(problem.ny(), 0);
  for (int x = 1; x < problem.nx() - 1; ++x) {
    for (int y = 1; y < problem.ny() - 1; ++y) {
      if (!problem.is_fixed(x, y)) ++free_per_y[y];
    }
  }

  SolveReport report;
  report.final_field = TemperatureField::from_problem(problem);
  report.per_y_ops.assign(problem.ny(), 0);

  double max_change = 0.0;
  do {
    const GsCycleResult cycle = gs_cycle(report.final_field, problem);
    max_change = cycle.max_change;
    report.op_count += cycle.collections;
    ++report.cycles;
    for (int y = 0; y < problem.ny(); ++y) report.per_y_ops[y] += free_per_y[y];
  } while (max_change >= config.epsilon && report.cycles < config.max_cycles);

  report.converged = max_change < config.epsilon;
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

}  // namespace dheat
