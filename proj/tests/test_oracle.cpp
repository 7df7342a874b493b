#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "dheat/dense_oracle.hpp"
#include "dheat/grid.hpp"
#include "dheat/linear_system.hpp"

using namespace dheat;

namespace {

DirichletSpec heated_bottom_edges() {
  DirichletSpec d;
  d.edge_y0 = 100.0;
  return d;
}

}  // namespace

TEST_CASE("dense system structure: unit diagonal, -1/4 off-diagonals") {
  DirichletSpec d = heated_bottom_edges();
  d.pins = {{3, 2, 55.0}};
  const GridProblem p = build_problem({10, 7}, d);
  const DenseSystem sys = build_dense_system(as_linear_system(p));

  for (int r = 0; r < sys.n; ++r) {
    int off_diag = 0;
    for (int c = 0; c < sys.n; ++c) {
      const double v = sys.matrix[std::size_t(r) * sys.n + c];
      if (r == c) {
        CHECK(v == 1.0);
      } else if (v != 0.0) {
        CHECK(v == -0.25);
        ++off_diag;
      }
    }
    CHECK(off_diag <= 4);
  }
}

TEST_CASE("one-unknown system solves directly") {
  const GridProblem p = build_problem({3, 3}, heated_bottom_edges());
  const DenseSystem sys = build_dense_system(as_linear_system(p));
  REQUIRE(sys.n == 1);
  CHECK(sys.matrix[0] == 1.0);
  CHECK(sys.rhs[0] == 25.0);
  CHECK(dense_solve(sys)[0] == 25.0);
}

TEST_CASE("4x4 grid solution matches hand elimination") {
  // Two unknowns by symmetry: a = 25 + (a+b)/4 and b = (a+b)/4,
  // giving a = 37.5 (y=1 cells) and b = 12.5 (y=2 cells).
  const GridProblem p = build_problem({4, 4}, heated_bottom_edges());
  const LinearSystemView view = as_linear_system(p);
  const std::vector<double> x = dense_solve(build_dense_system(view));
  REQUIRE(x.size() == 4);
  for (int row = 0; row < 4; ++row) {
    const double expected = view.cell(row).y == 1 ? 37.5 : 12.5;
    CHECK_THAT(x[row], Catch::Matchers::WithinAbs(expected, 1e-12));
  }
}

TEST_CASE("constant boundary data gives a constant field") {
  const double c = 42.0;
  DirichletSpec d{c, c, c, c, {{2, 2, c}, {5, 4, c}}};
  const GridProblem p = build_problem({8, 8}, d);
  const std::vector<double> x =
      dense_solve(build_dense_system(as_linear_system(p)));
  for (const double v : x) {
    CHECK_THAT(v, Catch::Matchers::WithinAbs(c, 1e-12));
  }
}

TEST_CASE("oracle residual and maximum principle on random problems") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const GridSpec grid{3 + int(rng() % 9), 3 + int(rng() % 9)};
    DirichletSpec d;
    auto value = [&] { return double(rng() % 2000) / 13.0; };
    d.edge_x0 = value();
    d.edge_x1 = value();
    d.edge_y0 = value();
    d.edge_y1 = value();
    std::set<std::pair<int, int>> used;
    while (d.pins.size() < rng() % 3) {
      const int x = 1 + int(rng() % (grid.nx - 2));
      const int y = 1 + int(rng() % (grid.ny - 2));
      if (used.insert({x, y}).second) d.pins.push_back({x, y, value()});
    }

    const GridProblem p = build_problem(grid, d);
    const LinearSystemView view = as_linear_system(p);
    const DenseSystem sys = build_dense_system(view);
    const std::vector<double> x = dense_solve(sys);

    double b_max = 0.0;
    for (const double b : sys.rhs) b_max = std::max(b_max, std::fabs(b));

    double fixed_min = std::min({d.edge_x0, d.edge_x1, d.edge_y0, d.edge_y1});
    double fixed_max = std::max({d.edge_x0, d.edge_x1, d.edge_y0, d.edge_y1});
    for (const PinnedCell& pin : d.pins) {
      fixed_min = std::min(fixed_min, pin.value);
      fixed_max = std::max(fixed_max, pin.value);
    }

    for (int r = 0; r < sys.n; ++r) {
      double residual = -sys.rhs[r];
      for (int c = 0; c < sys.n; ++c) {
        residual += sys.matrix[std::size_t(r) * sys.n + c] * x[c];
      }
      CHECK(std::fabs(residual) <= 1e-10 * (1.0 + b_max));
      CHECK(x[r] >= fixed_min - 1e-9);
      CHECK(x[r] <= fixed_max + 1e-9);
    }
  }
}

TEST_CASE("desk-scale guard rejects oversized systems") {
  const GridProblem p = build_problem({70, 70}, heated_bottom_edges());
  CHECK(p.free_count() > 4096);
  CHECK_THROWS_AS(dense_solve(build_dense_system(as_linear_system(p))),
                  std::invalid_argument);
}

TEST_CASE("compare_fields measures over free cells") {
  const GridProblem p = build_problem({5, 5}, heated_bottom_edges());
  TemperatureField a = TemperatureField::from_problem(p);
  TemperatureField b = a;

  SECTION("identical fields") {
    const FieldDiff diff = compare_fields(a, b, p);
    CHECK(diff.max_abs == 0.0);
    CHECK(diff.rms == 0.0);
  }

  SECTION("one of nine free cells differs by 0.5") {
    b.at(2, 2) += 0.5;
    const FieldDiff diff = compare_fields(a, b, p);
    CHECK(diff.max_abs == 0.5);
    CHECK_THAT(diff.rms, Catch::Matchers::WithinAbs(0.5 / 3.0, 1e-15));
  }

  SECTION("fixed-cell differences are ignored") {
    b.at(0, 2) += 9.0;
    const FieldDiff diff = compare_fields(a, b, p);
    CHECK(diff.max_abs == 0.0);
  }

  SECTION("dimension mismatch is rejected") {
    const GridProblem q = build_problem({6, 5}, heated_bottom_edges());
    const TemperatureField c = TemperatureField::from_problem(q);
    CHECK_THROWS_AS(compare_fields(a, c, p), std::invalid_argument);
  }
}
