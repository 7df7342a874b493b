#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dheat/d_iteration.hpp"
#include "dheat/grid.hpp"
#include "dheat/solver_types.hpp"

// The measurement kernels below are compiled without optimization and use
// two-level T[x][y] indexing. The per-visit cost split (iteration vs
// operation) is only observable on the canonical loop nest; at -O2 the
// optimizer rewrites the bare iteration loop into a form no solver runs.
#if defined(__clang__)
#define DHEAT_NO_OPT __attribute__((optnone))
#elif defined(__GNUC__)
#define DHEAT_NO_OPT __attribute__((optimize("O0")))
#else
#define DHEAT_NO_OPT
#endif

namespace dheat {

enum class Method { GS, DI };

/// Runtime model RT = (alpha + beta) * nx * ny * nb_iter + c.
/// alpha: seconds per cell visit and cycle, without the operation.
/// beta: additional seconds per collection/diffusion.
/// c: constant initialization cost in seconds.
struct CostEstimate {
  double alpha = 0.0;
  double beta = 0.0;
  double c = 0.0;
  std::int64_t nb_iter = 0;
  Method method = Method::GS;
};

/// Accumulator sink; measurement kernels publish their sums here so the
/// timed loops cannot be discarded.
inline volatile double cost_model_sink = 0.0;

namespace detail {

DHEAT_NO_OPT inline double kernel_gs_alpha(std::int64_t nb_iter, int nx,
                                           int ny, std::uint8_t** bnd,
                                           double** t) {
  double sum = 0.0;
  for (std::int64_t it = 0; it < nb_iter; ++it) {
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        if (!bnd[x][y]) sum += t[x][y];
      }
    }
  }
  return sum;
}

DHEAT_NO_OPT inline double kernel_gs_alpha_beta(std::int64_t nb_iter, int nx,
                                                int ny, std::uint8_t** bnd,
                                                double** t) {
  double sum = 0.0;
  for (std::int64_t it = 0; it < nb_iter; ++it) {
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        if (!bnd[x][y]) {
          t[x][y] = 0.25 * (t[x - 1][y] + t[x][y - 1] + t[x + 1][y] + t[x][y + 1]);
          sum += t[x][y];
        }
      }
    }
  }
  return sum;
}

DHEAT_NO_OPT inline double kernel_di_alpha(std::int64_t nb_iter, int nx,
                                           int ny, std::uint8_t** bnd,
                                           std::uint8_t** open, double** f,
                                           double** h, double threshold) {
  double sum = 0.0;
  for (std::int64_t it = 0; it < nb_iter; ++it) {
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        if (!bnd[x][y] && open[x][y]) {
          const double transit = f[x][y];
          if (transit > threshold) sum += h[x][y];
        }
      }
    }
  }
  return sum;
}

DHEAT_NO_OPT inline double kernel_di_alpha_beta(std::int64_t nb_iter, int nx,
                                                int ny, std::uint8_t** bnd,
                                                std::uint8_t** open,
                                                double** f, double** h,
                                                double threshold) {
  double sum = 0.0;
  for (std::int64_t it = 0; it < nb_iter; ++it) {
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        if (!bnd[x][y] && open[x][y]) {
          const double transit = f[x][y];
          if (transit > threshold) {
            h[x][y] += transit;
            f[x][y] = 0.0;
            const double share = 0.25 * transit;
            if (!bnd[x - 1][y]) f[x - 1][y] += share;
            if (!bnd[x][y - 1]) f[x][y - 1] += share;
            if (!bnd[x + 1][y]) f[x + 1][y] += share;
            if (!bnd[x][y + 1]) f[x][y + 1] += share;
            sum += transit;
          }
        }
      }
    }
  }
  return sum;
}

/// Row-pointer arrays for the kernels, mirroring the solver's layout.
struct CostScratch {
  std::vector<std::vector<double>> t_rows, f_rows, h_rows;
  std::vector<std::vector<std::uint8_t>> bnd_rows, open_rows;
  std::vector<double*> t, f, h;
  std::vector<std::uint8_t*> bnd, open;

  explicit CostScratch(const GridProblem& problem) {
    const int nx = problem.nx();
    const int ny = problem.ny();
    t_rows.assign(nx, std::vector<double>(ny, 1.0));
    f_rows.assign(nx, std::vector<double>(ny, 1.0));
    h_rows.assign(nx, std::vector<double>(ny, 0.0));
    bnd_rows.assign(nx, std::vector<std::uint8_t>(ny, 0));
    open_rows.assign(nx, std::vector<std::uint8_t>(ny, 1));
    for (int x = 0; x < nx; ++x) {
      for (int y = 0; y < ny; ++y) {
        bnd_rows[x][y] = problem.is_fixed(x, y) ? 1 : 0;
      }
    }
    auto collect = [](auto& rows, auto& ptrs) {
      ptrs.resize(rows.size());
      for (std::size_t r = 0; r < rows.size(); ++r) ptrs[r] = rows[r].data();
    };
    collect(t_rows, t);
    collect(f_rows, f);
    collect(h_rows, h);
    collect(bnd_rows, bnd);
    collect(open_rows, open);
  }

  void reset_fluid() {
    for (auto& row : f_rows) std::fill(row.begin(), row.end(), 1.0);
  }
};

/// Fastest of five timed runs, after one untimed warmup run. The
/// minimum estimates the intrinsic cost: scheduler preemption and
/// frequency excursions only ever add time.
template <class Body>
double fastest_of_5(Body&& body) {
  body();
  double best = 0.0;
  for (int rep = 0; rep < 5; ++rep) {
    const auto t0 = std::chrono::steady_clock::now();
    body();
    const double s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    if (rep == 0 || s < best) best = s;
  }
  return best;
}

inline void check_nb_iter(std::int64_t nb_iter) {
  if (nb_iter < 10) {
    throw std::invalid_argument("cost measurements need nb_iter >= 10");
  }
}

}  // namespace detail

/// Seconds per cell visit and cycle for the bare sweep: boundary test
/// plus accumulate for GS; boundary test, gate check and threshold
/// compare for DI. The elapsed time is divided by nb_iter * nx * ny.
inline double measure_alpha(Method method, const GridProblem& problem,
                            std::int64_t nb_iter) {
  detail::check_nb_iter(nb_iter);
  detail::CostScratch s(problem);
  const int nx = problem.nx();
  const int ny = problem.ny();
  const double denom = static_cast<double>(nb_iter) * nx * ny;
  const double seconds = detail::fastest_of_5([&] {
    if (method == Method::GS) {
      cost_model_sink = detail::kernel_gs_alpha(nb_iter, nx, ny, s.bnd.data(),
                                                s.t.data());
    } else {
      cost_model_sink = detail::kernel_di_alpha(
          nb_iter, nx, ny, s.bnd.data(), s.open.data(), s.f.data(),
          s.h.data(), 0.025);
    }
  });
  return seconds / denom;
}

/// Same sweep with the real operation forced on every visit (the DI
/// threshold is set permissive so every visit diffuses).
inline double measure_alpha_beta(Method method, const GridProblem& problem,
                                 std::int64_t nb_iter) {
  detail::check_nb_iter(nb_iter);
  detail::CostScratch s(problem);
  const int nx = problem.nx();
  const int ny = problem.ny();
  const double denom = static_cast<double>(nb_iter) * nx * ny;
  const double seconds = detail::fastest_of_5([&] {
    if (method == Method::GS) {
      cost_model_sink = detail::kernel_gs_alpha_beta(nb_iter, nx, ny,
                                                     s.bnd.data(), s.t.data());
    } else {
      s.reset_fluid();
      cost_model_sink = detail::kernel_di_alpha_beta(
          nb_iter, nx, ny, s.bnd.data(), s.open.data(), s.f.data(),
          s.h.data(), -1.0);
    }
  });
  return seconds / denom;
}

/// Constant cost c: time to allocate and initialize the solver state
/// (field for GS; fluid, history and gate for DI).
inline double estimate_c(const GridProblem& problem, Method method) {
  return detail::fastest_of_5([&] {
    if (method == Method::GS) {
      TemperatureField field = TemperatureField::from_problem(problem);
      cost_model_sink = field.values.back();
    } else {
      FluidState state = initial_fluid(problem);
      CellGate gate = CellGate::make(problem, OpenMode::TriState);
      cost_model_sink = state.fluid.back() + gate.data()[0];
    }
  });
}

inline CostEstimate estimate_costs(Method method, const GridProblem& problem,
                                   std::int64_t nb_iter) {
  CostEstimate est;
  est.method = method;
  est.nb_iter = nb_iter;
  est.alpha = measure_alpha(method, problem, nb_iter);
  const double ab = measure_alpha_beta(method, problem, nb_iter);
  est.beta = std::max(0.0, ab - est.alpha);
  est.c = estimate_c(problem, method);
  return est;
}

/// Model value RT = (alpha + beta) * nx * ny * nb_iter + c.
inline double predict_runtime(const CostEstimate& est,
                              const GridProblem& problem,
                              std::int64_t nb_iter) {
  return (est.alpha + est.beta) * static_cast<double>(problem.nx()) *
             static_cast<double>(problem.ny()) *
             static_cast<double>(nb_iter) +
         est.c;
}

}  // namespace dheat
