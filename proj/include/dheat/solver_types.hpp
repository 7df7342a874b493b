#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "dheat/grid.hpp"

namespace dheat {

/// Full-grid temperature array. Fixed cells hold their imposed value and
/// never change after initialization; Free cells hold the current solver
/// estimate.
struct TemperatureField {
  int nx = 0;
  int ny = 0;
  std::vector<double> values;

  static TemperatureField from_problem(const GridProblem& problem) {
    TemperatureField f;
    f.nx = problem.nx();
    f.ny = problem.ny();
    f.values.assign(problem.fixed_values().begin(),
                    problem.fixed_values().end());
    return f;
  }

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(ny) +
           static_cast<std::size_t>(y);
  }
  double at(int x, int y) const { return values[index(x, y)]; }
  double& at(int x, int y) { return values[index(x, y)]; }
};

/// Work-skipping strategy for the diffusion sweep.
///   None     - every Free cell is threshold-tested on every visit.
///   TwoState - per-cell open flag, separate boundary test.
///   TriState - boundary folded into the per-cell state, single test.
/// All three produce identical diffusion sequences; they differ only in
/// how many threshold tests (and boundary tests) are executed.
enum class OpenMode { None, TwoState, TriState };

struct SolveConfig {
  double epsilon = 0.1;  ///< stopping tolerance, same units as temperature
  double delta = 1.0;    ///< diffusion-threshold scale; threshold is epsilon/delta
  OpenMode open_mode = OpenMode::None;
  std::int64_t max_cycles = 1'000'000;  ///< safety cap on full sweeps
};

inline void validate(const SolveConfig& config) {
  if (!(config.epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  if (!(config.delta >= 1.0)) {
    throw std::invalid_argument("delta must be >= 1");
  }
  if (config.max_cycles < 1) {
    throw std::invalid_argument("max_cycles must be >= 1");
  }
}

/// Result of a solver run. op_count counts collections for Gauss-Seidel
/// and diffusions for the D-iteration; dc_tests counts diffusion-condition
/// evaluations (0 for Gauss-Seidel). per_y_ops[y] is the number of
/// operations performed at column y over the whole run;
/// sum(per_y_ops) == op_count.
struct SolveReport {
  std::int64_t cycles = 0;
  std::int64_t op_count = 0;
  std::int64_t dc_tests = 0;
  std::vector<std::int64_t> per_y_ops;
  TemperatureField final_field;
  double wall_time = 0.0;  ///< seconds, informational only
  bool converged = false;
};

}  // namespace dheat
