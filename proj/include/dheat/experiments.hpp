#pragma once

#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dheat/cost_model.hpp"
#include "dheat/d_iteration.hpp"
#include "dheat/gauss_seidel.hpp"
#include "dheat/grid.hpp"
#include "dheat/solver_types.hpp"

namespace dheat {

enum ExitCode : int { kOk = 0, kInvalidConfig = 1, kNotConverged = 2 };

/// One experiment invocation: which experiment to run, the problem, the
/// solver parameters, and the random-holes setup. A seed is mandatory
/// whenever holes > 0 so every reported number can be replayed.
struct ExperimentConfig {
  std::string experiment = "solve";  // solve|table1|table2|table3|table4|profile|holes|costs
  int nx = 1000;
  int ny = 1000;
  double edge_x0 = 0.0;
  double edge_x1 = 0.0;
  double edge_y0 = 100.0;
  double edge_y1 = 0.0;
  std::vector<PinnedCell> pins;  // explicit pins, e.g. from a problem file

  std::string method = "di";  // gs|di (solve experiment only)
  double epsilon = 0.1;
  double delta = 4.0;
  OpenMode open_mode = OpenMode::TriState;
  std::int64_t max_cycles = 1'000'000;

  int holes = 0;
  double hole_min = 0.0;
  double hole_max = 1000.0;
  std::optional<std::uint64_t> seed;

  bool desk = false;            // CI-speed scales
  std::int64_t cost_iters = 20; // nb_iter for the costs experiment
};

inline const char* to_string(OpenMode mode) {
  switch (mode) {
    case OpenMode::TwoState: return "two";
    case OpenMode::TriState: return "tri";
    default: return "none";
  }
}

inline OpenMode open_mode_from_string(const std::string& name) {
  if (name == "none") return OpenMode::None;
  if (name == "two") return OpenMode::TwoState;
  if (name == "tri") return OpenMode::TriState;
  throw std::invalid_argument("unknown open mode '" + name +
                              "' (expected none, two or tri)");
}

/// One CSV line of the report schema.
struct ReportRow {
  std::string experiment;
  std::string method;
  int nx = 0;
  int ny = 0;
  double epsilon = 0.0;
  double delta = 0.0;
  OpenMode open_mode = OpenMode::None;
  std::int64_t cycles = 0;
  std::int64_t ops = 0;
  std::int64_t dc_tests = 0;
  double wall_seconds = 0.0;
  bool converged = false;
};

inline constexpr const char* kReportHeader =
    "experiment,method,nx,ny,epsilon,delta,open_mode,cycles,ops,dc_tests,"
    "wall_seconds,converged";
inline constexpr const char* kProfileHeader = "y,diffusions";
inline constexpr const char* kCostsHeader = "method,nx,ny,nb_iter,alpha,beta,c";

namespace detail {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

inline std::string fmt_wall(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace detail

inline void write_report_row(std::ostream& os, const ReportRow& row) {
  os << row.experiment << ',' << row.method << ',' << row.nx << ',' << row.ny
     << ',' << detail::fmt_g(row.epsilon) << ',' << detail::fmt_g(row.delta)
     << ',' << to_string(row.open_mode) << ',' << row.cycles << ',' << row.ops
     << ',' << row.dc_tests << ',' << detail::fmt_wall(row.wall_seconds) << ','
     << (row.converged ? 1 : 0) << '\n';
}

/// Writes the report CSV: pinned header plus one line per row.
inline void emit_report(std::ostream& os, const std::vector<ReportRow>& rows) {
  os << kReportHeader << '\n';
  for (const ReportRow& row : rows) write_report_row(os, row);
}

/// Writes the per-y profile CSV: one line per interior y.
inline void emit_profile(std::ostream& os, const SolveReport& report) {
  os << kProfileHeader << '\n';
  const int ny = static_cast<int>(report.per_y_ops.size());
  for (int y = 1; y < ny - 1; ++y) {
    os << y << ',' << report.per_y_ops[y] << '\n';
  }
}

/// Draws pinned cells at distinct interior positions with values uniform
/// in [vmin, vmax). Positions colliding with `existing` pins are redrawn.
/// The generator mapping is fixed (mt19937_64, modulo positions, 53-bit
/// value mantissa) so a seed reproduces the same pins everywhere.
inline std::vector<PinnedCell> random_pins(
    int count, const GridSpec& grid, double vmin, double vmax,
    std::uint64_t seed, const std::vector<PinnedCell>& existing = {}) {
  if (count < 0) throw std::invalid_argument("holes count must be >= 0");
  if (grid.nx < 3 || grid.ny < 3) {
    throw std::invalid_argument("grid too small for pinned cells");
  }
  const std::int64_t capacity =
      static_cast<std::int64_t>(grid.nx - 2) * (grid.ny - 2) -
      static_cast<std::int64_t>(existing.size());
  if (count > capacity) {
    throw std::invalid_argument("more holes requested than interior cells");
  }

  std::set<std::pair<int, int>> occupied;
  for (const PinnedCell& pin : existing) occupied.insert({pin.x, pin.y});

  std::mt19937_64 rng(seed);
  const auto unit = [](std::uint64_t v) {
    return static_cast<double>(v >> 11) * 0x1.0p-53;
  };

  std::vector<PinnedCell> pins;
  pins.reserve(count);
  while (static_cast<int>(pins.size()) < count) {
    const int x = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(grid.nx - 2));
    const int y = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(grid.ny - 2));
    if (!occupied.insert({x, y}).second) continue;
    const double value = vmin + unit(rng()) * (vmax - vmin);
    pins.push_back({x, y, value});
  }
  return pins;
}

namespace detail {

inline GridProblem problem_from_config(const ExperimentConfig& cfg,
                                       int ny_override = 0,
                                       std::vector<PinnedCell> extra_pins = {}) {
  DirichletSpec dirichlet;
  dirichlet.edge_x0 = cfg.edge_x0;
  dirichlet.edge_x1 = cfg.edge_x1;
  dirichlet.edge_y0 = cfg.edge_y0;
  dirichlet.edge_y1 = cfg.edge_y1;
  dirichlet.pins = cfg.pins;
  dirichlet.pins.insert(dirichlet.pins.end(), extra_pins.begin(),
                        extra_pins.end());
  return build_problem({cfg.nx, ny_override > 0 ? ny_override : cfg.ny},
                       dirichlet);
}

inline SolveConfig solve_config(const ExperimentConfig& cfg) {
  SolveConfig config;
  config.epsilon = cfg.epsilon;
  config.delta = cfg.delta;
  config.open_mode = cfg.open_mode;
  config.max_cycles = cfg.max_cycles;
  return config;
}

inline std::vector<PinnedCell> holes_for(const ExperimentConfig& cfg) {
  if (cfg.holes <= 0) return {};
  if (!cfg.seed.has_value()) {
    throw std::invalid_argument("a seed is required when holes > 0");
  }
  return random_pins(cfg.holes, {cfg.nx, cfg.ny}, cfg.hole_min, cfg.hole_max,
                     *cfg.seed, cfg.pins);
}

inline ReportRow row_from_report(const std::string& experiment,
                                 const std::string& method,
                                 const GridProblem& problem,
                                 const SolveConfig& config,
                                 const SolveReport& report) {
  ReportRow row;
  row.experiment = experiment;
  row.method = method;
  row.nx = problem.nx();
  row.ny = problem.ny();
  row.epsilon = config.epsilon;
  row.delta = method == "gs" ? 0.0 : config.delta;
  row.open_mode = method == "gs" ? OpenMode::None : config.open_mode;
  row.cycles = report.cycles;
  row.ops = report.op_count;
  row.dc_tests = report.dc_tests;
  row.wall_seconds = report.wall_time;
  row.converged = report.converged;
  return row;
}

}  // namespace detail

/// Single solve with the configured method; one CSV row.
inline std::vector<ReportRow> run_solve(const ExperimentConfig& cfg,
                                        std::ostream& os) {
  if (cfg.method != "gs" && cfg.method != "di") {
    throw std::invalid_argument("unknown method '" + cfg.method + "'");
  }
  const GridProblem problem = detail::problem_from_config(cfg);
  const SolveConfig config = detail::solve_config(cfg);
  const SolveReport report =
      cfg.method == "gs" ? gs_solve(problem, config) : di_solve(problem, config);
  std::vector<ReportRow> rows{
      detail::row_from_report("solve", cfg.method, problem, config, report)};
  emit_report(os, rows);
  return rows;
}

/// Diffusion-threshold sweep: one DI row per delta in
/// {1,2,3,4,5,6,7,8,16} on the configured problem.
inline std::vector<ReportRow> run_table1(const ExperimentConfig& cfg,
                                         std::ostream& os) {
  const GridProblem problem = detail::problem_from_config(cfg);
  std::vector<ReportRow> rows;
  for (const double delta : {1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0, 8.0, 16.0}) {
    SolveConfig config = detail::solve_config(cfg);
    config.delta = delta;
    const SolveReport report = di_solve(problem, config);
    rows.push_back(
        detail::row_from_report("table1", "di", problem, config, report));
  }
  emit_report(os, rows);
  return rows;
}

namespace detail {

inline std::vector<ReportRow> run_ly_sweep(const ExperimentConfig& cfg,
                                           std::ostream& os,
                                           const std::string& name,
                                           OpenMode mode,
                                           const std::vector<int>& ny_values) {
  std::vector<ReportRow> rows;
  for (const int ny : ny_values) {
    const GridProblem problem = problem_from_config(cfg, ny);
    SolveConfig config = solve_config(cfg);
    config.open_mode = mode;
    rows.push_back(row_from_report(name, "gs", problem, config,
                                   gs_solve(problem, config)));
    rows.push_back(row_from_report(name, "di", problem, config,
                                   di_solve(problem, config)));
  }
  emit_report(os, rows);
  return rows;
}

}  // namespace detail

/// Grid-length sweeps comparing GS collections against DI diffusions.
/// table2 runs ungated, table3 with the open flag, table4 with the
/// tri-state gate; --desk switches to the small ny lists.
inline std::vector<ReportRow> run_table2(const ExperimentConfig& cfg,
                                         std::ostream& os) {
  const std::vector<int> full{1000, 2000, 3000, 4000, 5000};
  const std::vector<int> desk{100, 200, 500};
  return detail::run_ly_sweep(cfg, os, "table2", OpenMode::None,
                              cfg.desk ? desk : full);
}

inline std::vector<ReportRow> run_table3(const ExperimentConfig& cfg,
                                         std::ostream& os) {
  const std::vector<int> full{25, 50, 100, 1000, 2000, 3000, 4000, 5000};
  const std::vector<int> desk{25, 50, 100, 200, 500};
  return detail::run_ly_sweep(cfg, os, "table3", OpenMode::TwoState,
                              cfg.desk ? desk : full);
}

inline std::vector<ReportRow> run_table4(const ExperimentConfig& cfg,
                                         std::ostream& os) {
  const std::vector<int> full{50, 100, 1000, 2000, 3000, 4000, 5000};
  const std::vector<int> desk{50, 100, 200, 500};
  return detail::run_ly_sweep(cfg, os, "table4", OpenMode::TriState,
                              cfg.desk ? desk : full);
}

/// Per-y diffusion totals of a DI run; emits the profile CSV.
inline SolveReport run_profile(const ExperimentConfig& cfg, std::ostream& os) {
  const GridProblem problem =
      detail::problem_from_config(cfg, 0, detail::holes_for(cfg));
  const SolveConfig config = detail::solve_config(cfg);
  const SolveReport report = di_solve(problem, config);
  emit_profile(os, report);
  return report;
}

/// Seeded random imposed-temperature cells; runs GS and DI on the same
/// pinned problem and emits both rows.
inline std::vector<ReportRow> run_holes(const ExperimentConfig& cfg,
                                        std::ostream& os) {
  const GridProblem problem =
      detail::problem_from_config(cfg, 0, detail::holes_for(cfg));
  const SolveConfig config = detail::solve_config(cfg);
  std::vector<ReportRow> rows;
  rows.push_back(detail::row_from_report("holes", "gs", problem, config,
                                         gs_solve(problem, config)));
  rows.push_back(detail::row_from_report("holes", "di", problem, config,
                                         di_solve(problem, config)));
  emit_report(os, rows);
  return rows;
}

struct CostRow {
  Method method = Method::GS;
  int nx = 0;
  int ny = 0;
  CostEstimate estimate;
};

/// Cost-model estimation over a fixed set of grid shapes; emits the
/// costs CSV (all timing data, so rows are machine-dependent).
inline std::vector<CostRow> run_costs(const ExperimentConfig& cfg,
                                      std::ostream& os) {
  const std::vector<std::pair<int, int>> full{
      {100, 100}, {200, 200}, {1000, 1000}, {100, 1000}, {200, 5000}, {5000, 200}};
  const std::vector<std::pair<int, int>> desk{{100, 100}, {200, 200}, {100, 1000}};

  os << kCostsHeader << '\n';
  std::vector<CostRow> rows;
  for (const auto& [nx, ny] : cfg.desk ? desk : full) {
    const GridProblem problem = build_problem(
        {nx, ny}, {cfg.edge_x0, cfg.edge_x1, cfg.edge_y0, cfg.edge_y1, {}});
    for (const Method method : {Method::GS, Method::DI}) {
      CostRow row{method, nx, ny,
                  estimate_costs(method, problem, cfg.cost_iters)};
      os << (method == Method::GS ? "gs" : "di") << ',' << nx << ',' << ny
         << ',' << row.estimate.nb_iter << ','
         << detail::fmt_g(row.estimate.alpha) << ','
         << detail::fmt_g(row.estimate.beta) << ','
         << detail::fmt_g(row.estimate.c) << '\n';
      rows.push_back(std::move(row));
    }
  }
  return rows;
}

/// Dispatches an experiment and maps the outcome to a process exit code:
/// 0 on success, 2 if any solver run failed to converge within its cycle
/// cap. Configuration errors throw std::invalid_argument (exit code 1 in
/// the CLI).
inline int run_experiment(const ExperimentConfig& cfg, std::ostream& os) {
  if (cfg.holes > 0 && !cfg.seed.has_value()) {
    throw std::invalid_argument("a seed is required when holes > 0");
  }

  std::vector<ReportRow> rows;
  if (cfg.experiment == "solve") {
    rows = run_solve(cfg, os);
  } else if (cfg.experiment == "table1") {
    rows = run_table1(cfg, os);
  } else if (cfg.experiment == "table2") {
    rows = run_table2(cfg, os);
  } else if (cfg.experiment == "table3") {
    rows = run_table3(cfg, os);
  } else if (cfg.experiment == "table4") {
    rows = run_table4(cfg, os);
  } else if (cfg.experiment == "profile") {
    return run_profile(cfg, os).converged ? kOk : kNotConverged;
  } else if (cfg.experiment == "holes") {
    rows = run_holes(cfg, os);
  } else if (cfg.experiment == "costs") {
    run_costs(cfg, os);
    return kOk;
  } else {
    throw std::invalid_argument("unknown experiment '" + cfg.experiment + "'");
  }

  for (const ReportRow& row : rows) {
    if (!row.converged) return kNotConverged;
  }
  return kOk;
}

}  // namespace dheat
