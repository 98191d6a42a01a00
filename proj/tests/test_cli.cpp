#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string tmp_out = std::string(SLEKIT_TMP) + "/stdout.txt";
  fs::create_directories(SLEKIT_TMP);
  const std::string cmd =
      std::string(SLEKIT_BIN) + " " + args + " > " + tmp_out + " 2>&1";
  const int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  std::ifstream is(tmp_out);
  std::stringstream ss;
  ss << is.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  REQUIRE(is.good());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("--help lists every subcommand and exits 0") {
  const auto r = run("--help");
  CHECK(r.exit_code == 0);
  for (const char* name : {"trace", "radial", "explore", "harmonic", "lerw",
                           "ust", "peano", "formula", "verify"})
    CHECK(r.out.find(name) != std::string::npos);
}

TEST_CASE("validation failures exit with code 2") {
  CHECK(run("trace --steps 100").exit_code == 2);      // missing required
  CHECK(run("bogus-subcommand").exit_code == 2);       // unknown command
  CHECK(run("formula cardy --xi 0.3 --kappa 4.0 ").exit_code == 2);  // domain
}

TEST_CASE("formula left-passage prints 0.75") {
  const auto r = run("formula left-passage --kappa 4 --x0 1 --y0 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.substr(0, 4) == "0.75");
}

TEST_CASE("formula arm prints exact rationals") {
  const auto r = run("formula arm --k 3 --geometry half-plane");
  CHECK(r.exit_code == 0);
  CHECK(r.out == "2/1\n");
}

TEST_CASE("trace outputs are byte-identical across runs") {
  const fs::path d1 = fs::path(SLEKIT_TMP) / "t1";
  const fs::path d2 = fs::path(SLEKIT_TMP) / "t2";
  const std::string base =
      "trace --kappa 6 --steps 500 --seed 7 --format svg --out-dir ";
  CHECK(run(base + d1.string()).exit_code == 0);
  CHECK(run(base + d2.string()).exit_code == 0);
  CHECK(slurp(d1 / "trace.csv") == slurp(d2 / "trace.csv"));
  CHECK(slurp(d1 / "trace.svg") == slurp(d2 / "trace.svg"));
  CHECK(slurp(d1 / "driver.csv") == slurp(d2 / "driver.csv"));
  CHECK(slurp(d1 / "trace.csv").substr(0, 8) == std::string("t,re,im\n"));
}

TEST_CASE("simulation commands write their artifacts") {
  const fs::path dir = fs::path(SLEKIT_TMP) / "sims";
  CHECK(run("explore --width 14 --height 10 --seed 3 --format svg --out-dir " +
            dir.string())
            .exit_code == 0);
  CHECK(fs::exists(dir / "explore_path.csv"));
  CHECK(fs::exists(dir / "explore_colors.csv"));
  CHECK(fs::exists(dir / "explore.svg"));

  CHECK(run("ust --width 8 --height 8 --seed 5 --format svg --out-dir " +
            dir.string())
            .exit_code == 0);
  CHECK(fs::exists(dir / "ust.csv"));

  CHECK(run("peano --width 6 --height 5 --seed 5 --format svg --out-dir " +
            dir.string())
            .exit_code == 0);
  CHECK(fs::exists(dir / "peano.csv"));
  CHECK(fs::exists(dir / "peano.svg"));

  CHECK(run("lerw --width 21 --height 21 --seed 2 --out-dir " + dir.string())
            .exit_code == 0);
  CHECK(fs::exists(dir / "lerw.csv"));

  CHECK(run("radial --kappa 2 --steps 60 --seed 4 --out-dir " + dir.string())
            .exit_code == 0);
  CHECK(fs::exists(dir / "radial.csv"));

  CHECK(run("harmonic --width 10 --height 8 --seed 6 --out-dir " + dir.string())
            .exit_code == 0);
  CHECK(fs::exists(dir / "harmonic_path.csv"));
}

TEST_CASE("verify suite --quick: all pass, JSON deterministic up to runtime") {
  const fs::path d1 = fs::path(SLEKIT_TMP) / "v1";
  const fs::path d2 = fs::path(SLEKIT_TMP) / "v2";
  const std::string base = "verify suite --quick --seed 1 --out-dir ";
  const auto r1 = run(base + d1.string());
  CHECK(r1.exit_code == 0);
  const auto r2 = run(base + d2.string());
  CHECK(r2.exit_code == 0);

  auto j1 = nlohmann::json::parse(slurp(d1 / "report.json"));
  auto j2 = nlohmann::json::parse(slurp(d2 / "report.json"));
  REQUIRE(j1.is_array());
  REQUIRE(j1.size() == j2.size());
  for (std::size_t i = 0; i < j1.size(); ++i) {
    CHECK(j1[i]["pass"].get<bool>());
    // runtime_s is wall-clock; everything else must match bit for bit
    j1[i].erase("runtime_s");
    j2[i].erase("runtime_s");
    CHECK(j1[i] == j2[i]);
    for (const char* field : {"name", "exact", "mean", "std_err", "n", "z",
                              "allowance", "pass", "seed"})
      CHECK(j1[i].contains(field));
  }
  CHECK(fs::exists(d1 / "report.csv"));
}
