// Integration tests that drive the built CLI binary. The binary path comes
// from the HPM_CLI_PATH environment variable set by the test registration.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

std::string cli_path() {
  const char* p = std::getenv("HPM_CLI_PATH");
  REQUIRE(p != nullptr);
  return p;
}

int run(const std::string& args) {
  const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path work_dir() {
  static fs::path p = [] {
    fs::path q = fs::temp_directory_path() / "hpm_cli_tests";
    fs::remove_all(q);
    fs::create_directories(q);
    return q;
  }();
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("gen then solve produces a trace and exits 0") {
  const fs::path w = work_dir();
  CHECK(run("gen --n 100 --d 400 --s 5 --sigma 0 --seed 1 --out " +
            (w / "inst").string()) == 0);
  CHECK(fs::exists(w / "inst/U.csv"));
  CHECK(fs::exists(w / "inst/meta"));
  CHECK(run("solve --algo hpm2 --eta 0.15 --s 5 --in " + (w / "inst").string() +
            " --out " + (w / "run").string()) == 0);
  CHECK(fs::exists(w / "run/trace.csv"));
  CHECK(fs::exists(w / "run/report"));
}

TEST_CASE("oracle solver without RIP constants exits 2") {
  const fs::path w = work_dir();
  REQUIRE(fs::exists(w / "inst"));
  CHECK(run("solve --algo hpm-oracle --in " + (w / "inst").string() + " --out " +
            (w / "run2").string()) == 2);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run("solve --algo hpm2") == 1);       // missing required flags
  CHECK(run("frobnicate") == 1);              // unknown subcommand
  CHECK(run("gen --bogus-flag 3 --out x") == 1);
  CHECK(run("solve --algo nonsense --in a --out b") == 1);
}

TEST_CASE("rip prints constants as key=value lines") {
  const fs::path w = work_dir();
  CHECK(run("gen --n 8 --d 12 --s 2 --seed 3 --out " + (w / "tiny").string()) == 0);
  const std::string out_file = (w / "rip.txt").string();
  CHECK(run("rip --matrix " + (w / "tiny/U.csv").string() + " --s 2 --out " + out_file) ==
        0);
  const std::string text = slurp(out_file);
  for (const char* key : {"delta_1", "delta_2", "delta_6", "theta_ss", "gamma"})
    CHECK(text.find(key) != std::string::npos);
}

TEST_CASE("oracle solve runs with a RIP file on a certified instance") {
  const fs::path w = work_dir();
  // identity measurement matrix: all constants zero, gamma = 0
  fs::create_directories(w / "ident");
  {
    std::ofstream u(w / "ident/U.csv");
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) u << (j ? "," : "") << (i == j ? 1 : 0);
      u << "\n";
    }
    std::ofstream x(w / "ident/x_star.csv");
    for (int i = 0; i < 6; ++i) x << (i == 1 ? 0.8 : i == 4 ? -0.6 : 0.0) << "\n";
    std::ofstream e(w / "ident/e.csv");
    for (int i = 0; i < 6; ++i) e << 0.0 << "\n";
    std::ofstream y(w / "ident/y.csv");
    for (int i = 0; i < 6; ++i) y << (i == 1 ? 0.8 : i == 4 ? -0.6 : 0.0) << "\n";
    std::ofstream m(w / "ident/meta");
    m << "n = 6\nd = 6\ns = 2\nseed = 0\n";
  }
  {
    std::ofstream rf(w / "rip_ident.txt");
    rf << "s = 2\ndelta_2 = 0\ndelta_6 = 0\ntheta_ss = 0\n";
  }
  CHECK(run("solve --algo hpm-oracle --s 2 --delta1 1 --in " + (w / "ident").string() +
            " --rip-file " + (w / "rip_ident.txt").string() + " --out " +
            (w / "orun").string()) == 0);
  const std::string report = slurp(w / "orun/report");
  CHECK(report.find("final_error") != std::string::npos);
}

TEST_CASE("gamma >= 1 in the RIP file exits 2") {
  const fs::path w = work_dir();
  {
    std::ofstream rf(w / "rip_bad.txt");
    rf << "s = 2\ndelta_2 = 0.6\ndelta_6 = 0.6\ntheta_ss = 0.4\n";
  }
  CHECK(run("solve --algo hpm-oracle --s 2 --delta1 1 --in " + (w / "ident").string() +
            " --rip-file " + (w / "rip_bad.txt").string() + " --out " +
            (w / "orun2").string()) == 2);
}

TEST_CASE("compare emits a per-solver summary") {
  const fs::path w = work_dir();
  CHECK(run("compare --against pgh --n 100 --d 500 --s 10 --sigma 0.01 --seed 2 --out " +
            (w / "cmp").string()) == 0);
  const std::string summary = slurp(w / "cmp/summary.csv");
  CHECK(summary.find("solver,final_error,final_top_s_error") != std::string::npos);
  CHECK(summary.find("hpm2,") != std::string::npos);
  CHECK(summary.find("pgh,") != std::string::npos);
}

TEST_CASE("config file values are read and flags override them") {
  const fs::path w = work_dir();
  {
    std::ofstream cf(w / "gen.cfg");
    cf << "# instance generation defaults\n";
    cf << "n = 40\n";
    cf << "d = 160\n";
    cf << "s = 4\n";
    cf << "seed = 5\n";
  }
  CHECK(run("gen --config " + (w / "gen.cfg").string() + " --out " +
            (w / "cfg_inst").string()) == 0);
  // 40 rows in U.csv
  std::ifstream u(w / "cfg_inst/U.csv");
  int rows = 0;
  std::string line;
  while (std::getline(u, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 40);
  // flag overrides the file
  CHECK(run("gen --config " + (w / "gen.cfg").string() + " --n 20 --out " +
            (w / "cfg_inst2").string()) == 0);
  std::ifstream u2(w / "cfg_inst2/U.csv");
  rows = 0;
  while (std::getline(u2, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 20);
}

TEST_CASE("sweep reruns reproduce byte-identical csv output") {
  const fs::path w = work_dir();
  const std::string args =
      "sweep --protocol setting1 --n 80 --d 300 --s 4 --seed 12 --trials 2 "
      "--max-iters 100 --out ";
  CHECK(run(args + (w / "sw_a").string()) == 0);
  CHECK(run(args + (w / "sw_b").string()) == 0);
  CHECK(slurp(w / "sw_a/summary.csv") == slurp(w / "sw_b/summary.csv"));
  CHECK(slurp(w / "sw_a/trial_0/trace.csv") == slurp(w / "sw_b/trial_0/trace.csv"));
  CHECK(slurp(w / "sw_a/trial_1/trace.csv") == slurp(w / "sw_b/trial_1/trace.csv"));
}
