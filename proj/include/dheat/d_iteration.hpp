#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "dheat/grid.hpp"
#include "dheat/linear_system.hpp"
#include "dheat/solver_types.hpp"

namespace dheat {

/// Diffusion-solver state: per-cell pending fluid F and accumulated
/// history H (the solution estimate), stored over the full grid with
/// zeros on Fixed cells. Between diffusions F = b + A*H - H holds for
/// the system of as_linear_system (checked by fluid_residual).
struct FluidState {
  int nx = 0;
  int ny = 0;
  std::vector<double> fluid;
  std::vector<double> history;

  std::size_t index(int x, int y) const {
    return static_cast<std::size_t>(x) * static_cast<std::size_t>(ny) +
           static_cast<std::size_t>(y);
  }
};

/// Empty start: H = 0 everywhere and F = b, i.e. each Free cell holds
/// 1/4 of the sum of its Fixed neighbour temperatures.
inline FluidState initial_fluid(const GridProblem& problem) {
  FluidState s;
  s.nx = problem.nx();
  s.ny = problem.ny();
  s.fluid.assign(problem.cell_count(), 0.0);
  s.history.assign(problem.cell_count(), 0.0);

  const auto kind = problem.kinds();
  const auto value = problem.fixed_values();
  const std::size_t ny = static_cast<std::size_t>(s.ny);
  for (int x = 1; x < s.nx - 1; ++x) {
    for (int y = 1; y < s.ny - 1; ++y) {
      const std::size_t i = s.index(x, y);
      if (kind[i] != 0) continue;
      double b = 0.0;
      if (kind[i - ny] != 0) b += value[i - ny];
      if (kind[i + ny] != 0) b += value[i + ny];
      if (kind[i - 1] != 0) b += value[i - 1];
      if (kind[i + 1] != 0) b += value[i + 1];
      s.fluid[i] = 0.25 * b;
    }
  }
  return s;
}

/// Moves the whole fluid of a Free cell into its history and credits a
/// quarter of it to each neighbour's fluid; quarters sent to Fixed
/// neighbours leave the system. Returns the absorbed amount.
inline double diffuse(FluidState& state, int x, int y,
                      const GridProblem& problem) {
  const std::size_t ny = static_cast<std::size_t>(state.ny);
  const std::size_t i = state.index(x, y);
  const auto kind = problem.kinds();

  const double f = state.fluid[i];
  state.history[i] += f;
  state.fluid[i] = 0.0;
  const double share = 0.25 * f;

  double absorbed = 0.0;
  for (const std::size_t j : {i - ny, i + ny, i - 1, i + 1}) {
    if (kind[j] == 0) {
      state.fluid[j] += share;
    } else {
      absorbed += share;
    }
  }
  return absorbed;
}

enum class GateState : std::uint8_t { Boundary = 0, Closed = 1, Open = 2 };

/// Per-cell work-skipping state. A Closed cell failed the diffusion
/// condition when last tested and has received no fluid since, so its
/// visit can be skipped without re-testing. Fixed cells are Boundary
/// forever (folded into the same array in TriState mode).
class CellGate {
 public:
  static CellGate make(const GridProblem& problem, OpenMode mode) {
    CellGate g;
    g.mode_ = mode;
    if (mode == OpenMode::None) return g;
    g.state_.assign(problem.cell_count(),
                    static_cast<std::uint8_t>(GateState::Open));
    const auto kind = problem.kinds();
    for (std::size_t i = 0; i < kind.size(); ++i) {
      if (kind[i] != 0) {
        g.state_[i] = mode == OpenMode::TriState
                          ? static_cast<std::uint8_t>(GateState::Boundary)
                          : 0;
      }
    }
    return g;
  }

  OpenMode mode() const { return mode_; }

  /// Gate of cell (x, y) in gated modes (TwoState reports Fixed cells as
  /// Boundary even though it tracks only an open flag).
  GateState state(const GridProblem& problem, int x, int y) const {
    const std::size_t i = problem.index(x, y);
    if (mode_ == OpenMode::TriState) return static_cast<GateState>(state_[i]);
    if (problem.is_fixed(x, y)) return GateState::Boundary;
    return state_[i] != 0 ? GateState::Open : GateState::Closed;
  }

  std::uint8_t* data() { return state_.data(); }
  const std::uint8_t* data() const { return state_.data(); }

 private:
  OpenMode mode_ = OpenMode::None;
  std::vector<std::uint8_t> state_;
};

struct DiCycleResult {
  std::int64_t diffusions = 0;
  std::int64_t dc_tests = 0;
  double max_diffused = 0.0;  ///< largest fluid moved by one diffusion
};

namespace detail {

template <OpenMode Mode>
DiCycleResult di_cycle_impl(FluidState& state, CellGate& gate,
                            const GridProblem& problem, double threshold,
                            std::int64_t* per_y) {
  constexpr auto kOpen = static_cast<std::uint8_t>(GateState::Open);
  constexpr auto kClosed = static_cast<std::uint8_t>(GateState::Closed);
  constexpr auto kBoundary = static_cast<std::uint8_t>(GateState::Boundary);

  const int nx = problem.nx();
  const int ny = problem.ny();
  const std::size_t nys = static_cast<std::size_t>(ny);
  const auto kind = problem.kinds();
  double* f = state.fluid.data();
  double* h = state.history.data();
  std::uint8_t* g = gate.data();

  DiCycleResult result;
  for (int x = 1; x < nx - 1; ++x) {
    const std::size_t row = static_cast<std::size_t>(x) * nys;
    for (int y = 1; y < ny - 1; ++y) {
      const std::size_t i = row + y;
      if constexpr (Mode == OpenMode::None) {
        if (kind[i] != 0) continue;
      } else if constexpr (Mode == OpenMode::TwoState) {
        if (kind[i] != 0) continue;
        if (g[i] == 0) continue;
      } else {
        if (g[i] != kOpen) continue;  // skips Boundary and Closed alike
      }

      ++result.dc_tests;
      const double transit = f[i];
      if (transit > threshold) {
        h[i] += transit;
        f[i] = 0.0;
        const double share = 0.25 * transit;
        if constexpr (Mode == OpenMode::TriState) {
          if (g[i - nys] != kBoundary) { f[i - nys] += share; g[i - nys] = kOpen; }
          if (g[i + nys] != kBoundary) { f[i + nys] += share; g[i + nys] = kOpen; }
          if (g[i - 1] != kBoundary) { f[i - 1] += share; g[i - 1] = kOpen; }
          if (g[i + 1] != kBoundary) { f[i + 1] += share; g[i + 1] = kOpen; }
        } else if constexpr (Mode == OpenMode::TwoState) {
          if (kind[i - nys] == 0) { f[i - nys] += share; g[i - nys] = 1; }
          if (kind[i + nys] == 0) { f[i + nys] += share; g[i + nys] = 1; }
          if (kind[i - 1] == 0) { f[i - 1] += share; g[i - 1] = 1; }
          if (kind[i + 1] == 0) { f[i + 1] += share; g[i + 1] = 1; }
        } else {
          if (kind[i - nys] == 0) f[i - nys] += share;
          if (kind[i + nys] == 0) f[i + nys] += share;
          if (kind[i - 1] == 0) f[i - 1] += share;
          if (kind[i + 1] == 0) f[i + 1] += share;
        }
        if (transit > result.max_diffused) result.max_diffused = transit;
        ++result.diffusions;
        if (per_y) ++per_y[y];
      } else {
        if constexpr (Mode == OpenMode::TwoState) {
          g[i] = 0;
        } else if constexpr (Mode == OpenMode::TriState) {
          g[i] = kClosed;
        }
      }
    }
  }
  return result;
}

}  // namespace detail

/// One full sweep in fixed order (x ascending outer, y ascending inner).
/// Each visited cell is tested against the diffusion condition
/// F > epsilon/delta and diffused on success; in gated modes, Closed
/// cells are skipped without a test, failing cells are closed, and every
/// Free neighbour receiving fluid is (re)opened. per_y_ops, when
/// non-empty, accumulates diffusion counts by y index.
inline DiCycleResult di_cycle(FluidState& state, CellGate& gate,
                              const GridProblem& problem,
                              const SolveConfig& config,
                              std::span<std::int64_t> per_y_ops = {}) {
  const double threshold = config.epsilon / config.delta;
  std::int64_t* per_y = per_y_ops.empty() ? nullptr : per_y_ops.data();
  switch (gate.mode()) {
    case OpenMode::TwoState:
      return detail::di_cycle_impl<OpenMode::TwoState>(state, gate, problem,
                                                       threshold, per_y);
    case OpenMode::TriState:
      return detail::di_cycle_impl<OpenMode::TriState>(state, gate, problem,
                                                       threshold, per_y);
    default:
      return detail::di_cycle_impl<OpenMode::None>(state, gate, problem,
                                                   threshold, per_y);
  }
}

/// The history embedded back into the grid: Fixed cells keep their
/// imposed values, Free cells hold H.
inline TemperatureField field_from_history(const FluidState& state,
                                           const GridProblem& problem) {
  TemperatureField field = TemperatureField::from_problem(problem);
  const auto kind = problem.kinds();
  for (std::size_t i = 0; i < kind.size(); ++i) {
    if (kind[i] == 0) field.values[i] = state.history[i];
  }
  return field;
}

/// Runs diffusion sweeps until no diffusion within a full sweep moves
/// more than config.epsilon (the per-sweep maximum H-increase drops
/// below epsilon, mirroring the Gauss-Seidel stopping rule) or
/// config.max_cycles is reached. The terminal sweep is included in the
/// cycle count.
inline SolveReport di_solve(const GridProblem& problem,
                            const SolveConfig& config) {
  validate(config);
  const auto start = std::chrono::steady_clock::now();

  FluidState state = initial_fluid(problem);
  CellGate gate = CellGate::make(problem, config.open_mode);

  SolveReport report;
  report.per_y_ops.assign(problem.ny(), 0);

  double max_diffused = 0.0;
  do {
    const DiCycleResult cycle =
        di_cycle(state, gate, problem, config, report.per_y_ops);
    max_diffused = cycle.max_diffused;
    report.op_count += cycle.diffusions;
    report.dc_tests += cycle.dc_tests;
    ++report.cycles;
  } while (max_diffused >= config.epsilon &&
           report.cycles < config.max_cycles);

  report.converged = max_diffused < config.epsilon;
  report.final_field = field_from_history(state, problem);
  report.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();
  return report;
}

/// Largest violation of the fluid accounting identity F = b + A*H - H
/// over the Free cells; 0 right after initial_fluid and within rounding
/// of 0 after any diffusion sequence.
inline double fluid_residual(const FluidState& state,
                             const LinearSystemView& system) {
  double worst = 0.0;
  for (int row = 0; row < system.n_unknowns(); ++row) {
    const auto [x, y] = system.cell(row);
    double expected = system.rhs(row);
    for (const StencilEntry& e : system.row_entries(row)) {
      const auto [ex, ey] = system.cell(e.col);
      expected += e.weight * state.history[state.index(ex, ey)];
    }
    expected -= state.history[state.index(x, y)];
    const double gap = std::fabs(state.fluid[state.index(x, y)] - expected);
    if (gap > worst) worst = gap;
  }
  return worst;
}

}  // namespace dheat
