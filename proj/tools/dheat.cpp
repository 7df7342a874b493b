// Experiment driver: builds a Dirichlet heat problem from flags or a
// problem file, runs the Gauss-Seidel or D-iteration solver (or one of
// the canned experiment sweeps) and writes CSV.
//
// Exit codes: 0 success, 1 invalid flags or configuration, 2 a solver
// run did not converge within its cycle cap.

#include <cstdint>
#include <exception>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dheat/experiments.hpp"
#include "dheat/problem_io.hpp"

int main(int argc, char** argv) {
  CLI::App app{"dheat - Gauss-Seidel vs D-iteration experiments on 2D "
               "Dirichlet heat problems"};

  dheat::ExperimentConfig cfg;
  std::string open_mode = "tri";
  std::string problem_path;
  std::string out_path;
  std::uint64_t seed = 0;
  bool nx_set = false, ny_set = false;

  app.add_option("--experiment", cfg.experiment,
                 "solve|table1|table2|table3|table4|profile|holes|costs")
      ->check(CLI::IsMember({"solve", "table1", "table2", "table3", "table4",
                             "profile", "holes", "costs"}));
  app.add_option("--method", cfg.method, "solver for --experiment solve")
      ->check(CLI::IsMember({"gs", "di"}));
  auto* nx_opt = app.add_option("--nx", cfg.nx, "grid points along x");
  auto* ny_opt = app.add_option("--ny", cfg.ny, "grid points along y");
  app.add_option("--edge-x0", cfg.edge_x0, "temperature on the x=0 edge");
  app.add_option("--edge-x1", cfg.edge_x1, "temperature on the x=nx-1 edge");
  app.add_option("--edge-y0", cfg.edge_y0, "temperature on the y=0 edge");
  app.add_option("--edge-y1", cfg.edge_y1, "temperature on the y=ny-1 edge");
  app.add_option("--epsilon", cfg.epsilon, "stopping tolerance");
  app.add_option("--delta", cfg.delta, "diffusion-threshold scale");
  app.add_option("--open-mode", open_mode, "work-skipping gate: none|two|tri")
      ->check(CLI::IsMember({"none", "two", "tri"}));
  app.add_option("--max-cycles", cfg.max_cycles, "sweep safety cap");
  app.add_option("--holes", cfg.holes, "number of random pinned cells");
  app.add_option("--hole-min", cfg.hole_min, "pinned value range lower bound");
  app.add_option("--hole-max", cfg.hole_max, "pinned value range upper bound");
  auto* seed_opt = app.add_option("--seed", seed, "RNG seed for --holes");
  app.add_option("--problem", problem_path,
                 "problem description file (key=value plus pin lines)");
  app.add_option("--out", out_path, "output CSV path (default: stdout)");
  app.add_flag("--desk", cfg.desk, "scale experiments to desk size (100x100)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : dheat::kInvalidConfig;
  }

  try {
    cfg.open_mode = dheat::open_mode_from_string(open_mode);
    if (seed_opt->count() > 0) cfg.seed = seed;
    nx_set = nx_opt->count() > 0;
    ny_set = ny_opt->count() > 0;

    if (!problem_path.empty()) {
      const dheat::ProblemDescription desc =
          dheat::load_problem_file(problem_path);
      if (!nx_set) cfg.nx = desc.grid.nx;
      if (!ny_set) cfg.ny = desc.grid.ny;
      cfg.edge_x0 = desc.dirichlet.edge_x0;
      cfg.edge_x1 = desc.dirichlet.edge_x1;
      cfg.edge_y0 = desc.dirichlet.edge_y0;
      cfg.edge_y1 = desc.dirichlet.edge_y1;
      cfg.pins = desc.dirichlet.pins;
    }
    if (cfg.desk) {
      if (!nx_set) cfg.nx = 100;
      if (!ny_set) cfg.ny = 100;
    }

    if (!out_path.empty()) {
      std::ofstream out(out_path);
      if (!out) {
        std::cerr << "dheat: cannot open output path: " << out_path << "\n";
        return dheat::kInvalidConfig;
      }
      return dheat::run_experiment(cfg, out);
    }
    return dheat::run_experiment(cfg, std::cout);
  } catch (const std::invalid_argument& e) {
    std::cerr << "dheat: " << e.what() << "\n";
    return dheat::kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "dheat: " << e.what() << "\n";
    return dheat::kInvalidConfig;
  }
}
