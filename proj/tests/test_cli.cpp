// End-to-end checks of the command-line driver: flag validation, exit
// codes and CSV outputs, run through the real binary.
#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#ifndef DHEAT_CLI_PATH
#error "DHEAT_CLI_PATH must point at the dheat binary"
#endif

namespace {

int run_cli(const std::string& args) {
  const std::string command =
      std::string(DHEAT_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WEXITSTATUS(status);
}

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("cli_test_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("solve run succeeds and writes the report") {
  TempFile csv("solve.csv");
  REQUIRE(run_cli("--experiment solve --method di --nx 3 --ny 3 --out " +
                  csv.path) == 0);
  const auto lines = read_lines(csv.path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[0].rfind("experiment,method,", 0) == 0);
  CHECK(lines[1].rfind("solve,di,3,3,", 0) == 0);
}

TEST_CASE("invalid flags exit with code 1") {
  CHECK(run_cli("--experiment solve --nx 20 --ny 20 --delta 0") == 1);
  CHECK(run_cli("--experiment solve --epsilon -1 --nx 20 --ny 20") == 1);
  CHECK(run_cli("--open-mode sideways") == 1);
  CHECK(run_cli("--experiment bogus") == 1);
  CHECK(run_cli("--experiment holes --desk --holes 3") == 1);  // no seed
  CHECK(run_cli("--experiment solve --nx 2 --ny 9") == 1);     // no interior
  CHECK(run_cli("--out /nonexistent-dir/x.csv --experiment solve --nx 3 --ny 3") == 1);
}

TEST_CASE("non-convergence exits with code 2") {
  CHECK(run_cli("--experiment solve --method gs --nx 30 --ny 30 "
                "--max-cycles 1") == 2);
}

TEST_CASE("desk flag scales the default problem") {
  TempFile csv("desk.csv");
  REQUIRE(run_cli("--experiment solve --method gs --desk --out " + csv.path) ==
          0);
  const auto lines = read_lines(csv.path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].rfind("solve,gs,100,100,", 0) == 0);
}

TEST_CASE("profile emits interior rows") {
  TempFile csv("profile.csv");
  REQUIRE(run_cli("--experiment profile --desk --out " + csv.path) == 0);
  const auto lines = read_lines(csv.path);
  REQUIRE(lines.size() == 99);
  CHECK(lines[0] == "y,diffusions");
}

TEST_CASE("problem files feed the solver") {
  TempFile problem("problem.txt");
  {
    std::ofstream out(problem.path);
    out << "nx=9\nny=7\nedge_y0=100\npin 4 3 55\n";
  }
  TempFile csv("fromfile.csv");
  REQUIRE(run_cli("--experiment solve --method gs --problem " + problem.path +
                  " --out " + csv.path) == 0);
  const auto lines = read_lines(csv.path);
  REQUIRE(lines.size() == 2);
  CHECK(lines[1].rfind("solve,gs,9,7,", 0) == 0);

  SECTION("missing problem file is an invalid configuration") {
    CHECK(run_cli("--experiment solve --problem does_not_exist.txt") == 1);
  }
}

TEST_CASE("holes experiment replays byte-identically except wall time") {
  TempFile a("holes_a.csv"), b("holes_b.csv");
  const std::string args =
      "--experiment holes --desk --holes 4 --seed 11 --out ";
  REQUIRE(run_cli(args + a.path) == 0);
  REQUIRE(run_cli(args + b.path) == 0);

  const auto la = read_lines(a.path);
  const auto lb = read_lines(b.path);
  REQUIRE(la.size() == 3);
  REQUIRE(la.size() == lb.size());
  for (std::size_t i = 0; i < la.size(); ++i) {
    std::istringstream sa(la[i]), sb(lb[i]);
    std::string fa, fb;
    int field = 0;
    while (std::getline(sa, fa, ',') && std::getline(sb, fb, ',')) {
      if (field != 10) CHECK(fa == fb);  // 10 = wall_seconds
      ++field;
    }
  }
}
