#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "dheat/cost_model.hpp"
#include "dheat/gauss_seidel.hpp"
#include "dheat/grid.hpp"

using namespace dheat;

namespace {

GridProblem plain_problem(int nx, int ny) {
  DirichletSpec d;
  d.edge_y0 = 100.0;
  return build_problem({nx, ny}, d);
}

}  // namespace

TEST_CASE("runtime model arithmetic") {
  CostEstimate est;
  est.alpha = 2.0e-8;
  est.beta = 4.2e-8;
  est.c = 0.0;
  const GridProblem p = plain_problem(1000, 1000);

  SECTION("model value") {
    CHECK_THAT(predict_runtime(est, p, 236),
               Catch::Matchers::WithinRel(14.632, 1e-12));
  }

  SECTION("zero cycles cost just the constant") {
    est.c = 0.125;
    CHECK(predict_runtime(est, p, 0) == 0.125);
  }

  SECTION("linear in the cell count") {
    est.c = 0.5;
    const GridProblem half = plain_problem(1000, 500);
    const double small = predict_runtime(est, half, 100) - est.c;
    const double big = predict_runtime(est, p, 100) - est.c;
    CHECK_THAT(big, Catch::Matchers::WithinRel(2.0 * small, 1e-12));
  }

  SECTION("linear in the cycle count") {
    const double one = predict_runtime(est, p, 100);
    const double three = predict_runtime(est, p, 300);
    CHECK_THAT(three, Catch::Matchers::WithinRel(3.0 * one, 1e-12));
  }
}

TEST_CASE("measurements reject too-few iterations") {
  const GridProblem p = plain_problem(50, 50);
  CHECK_THROWS_AS(measure_alpha(Method::GS, p, 9), std::invalid_argument);
  CHECK_THROWS_AS(measure_alpha_beta(Method::DI, p, 0),
                  std::invalid_argument);
}

TEST_CASE("visit cost is positive and higher for the gated sweep") {
  const GridProblem p = plain_problem(200, 200);
  const double a_gs = measure_alpha(Method::GS, p, 10);
  const double a_di = measure_alpha(Method::DI, p, 10);
  CHECK(a_gs > 0.0);
  CHECK(a_di > a_gs);
}

TEST_CASE("operation cost comes out nonnegative") {
  const GridProblem p = plain_problem(150, 150);
  for (const Method m : {Method::GS, Method::DI}) {
    const CostEstimate est = estimate_costs(m, p, 10);
    CHECK(est.alpha > 0.0);
    CHECK(est.beta >= 0.0);
    CHECK(est.c >= 0.0);
    CHECK(est.nb_iter == 10);
    // the full sweep costs more than the bare one
    CHECK(measure_alpha_beta(m, p, 10) > est.alpha);
  }
}

TEST_CASE("initialization estimate is small and repeatable") {
  SECTION("tiny problem") {
    const GridProblem p = plain_problem(3, 3);
    const double c = estimate_c(p, Method::DI);
    CHECK(c >= 0.0);
    CHECK(c < 1e-3);
  }

  SECTION("coefficient of variation across repeated calls") {
    const GridProblem p = plain_problem(200, 200);
    double samples[5];
    double mean = 0.0;
    for (double& s : samples) {
      s = estimate_c(p, Method::DI);
      mean += s;
    }
    mean /= 5.0;
    double var = 0.0;
    for (const double s : samples) var += (s - mean) * (s - mean);
    var /= 5.0;
    REQUIRE(mean > 0.0);
    CHECK(std::sqrt(var) / mean < 0.5);
  }

  SECTION("initialization is a sliver of a full-scale solve") {
    const GridProblem p = plain_problem(1000, 1000);
    const double c = estimate_c(p, Method::GS);
    const SolveReport report = gs_solve(p, {});
    REQUIRE(report.converged);
    CHECK(c < 0.05 * report.wall_time);
  }
}
