// End-to-end tests of the rmmean command-line tool. The binary path is
// passed as the first program argument by CTest.
#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace {

std::string g_rmmean;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run(const std::string& args) {
  const std::string out_file = "cli_stdout_tmp.txt";
  const std::string cmd =
      g_rmmean + " " + args + " > " + out_file + " 2> cli_stderr_tmp.txt";
  const int status = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_file);
  std::ostringstream ss;
  ss << in.rdbuf();
  res.out = ss.str();
  return res;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string strip_timing(const std::string& report) {
  return std::regex_replace(report,
                            std::regex("\"timing_seconds\": [^,\\n]*"),
                            "\"timing_seconds\": X");
}

const char* kLineData =
    "rmm-v1,euclidean,1\n0\n1\n3\n";

}  // namespace

TEST_CASE("estimate with an infinite cutoff is the arithmetic mean") {
  write_file("cli_line.csv", kLineData);
  const RunResult r = run("estimate --data cli_line.csv --c inf");
  REQUIRE(r.exit_code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["schema"] == "rmm-report-v1");
  CHECK(report["command"] == "estimate");
  CHECK(report["config"]["c"] == "inf");
  CHECK(report["results"]["converged"] == true);
  CHECK(report["results"]["mean"][0].get<double>() ==
        doctest::Approx(4.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("estimate of a single-point dataset returns that point") {
  write_file("cli_single.csv", "rmm-v1,sphere,2\n0,0,1\n");
  const RunResult r = run("estimate --data cli_single.csv --c 1.0");
  REQUIRE(r.exit_code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["results"]["mean"][2].get<double>() == doctest::Approx(1.0));
  CHECK(report["results"]["objective"].get<double>() ==
        doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("the auto cutoff is resolved and echoed into the report") {
  write_file("cli_line.csv", kLineData);
  const RunResult r = run("estimate --data cli_line.csv --c auto");
  REQUIRE(r.exit_code == 0);
  const auto report = nlohmann::json::parse(r.out);
  // median 1, absolute deviations {1, 0, 2}, MAD 1; 1.345 * 1 / 0.6745
  CHECK(report["config"]["c"].get<double>() ==
        doctest::Approx(1.345 / 0.6745).epsilon(1e-6));
}

TEST_CASE("reports are byte-identical across runs modulo timing") {
  write_file("cli_line.csv", kLineData);
  REQUIRE(run("estimate --data cli_line.csv --c 1.2 --out cli_r1.json")
              .exit_code == 0);
  REQUIRE(run("estimate --data cli_line.csv --c 1.2 --out cli_r2.json")
              .exit_code == 0);
  CHECK(strip_timing(read_file("cli_r1.json")) ==
        strip_timing(read_file("cli_r2.json")));

  REQUIRE(run("simulate --study bridge --seed 7 --out cli_s1.json").exit_code ==
          0);
  REQUIRE(run("simulate --study bridge --seed 7 --out cli_s2.json").exit_code ==
          0);
  CHECK(strip_timing(read_file("cli_s1.json")) ==
        strip_timing(read_file("cli_s2.json")));
}

TEST_CASE("one-sample test at the estimate accepts; bad alpha is a usage error") {
  write_file("cli_plane.csv",
             "rmm-v1,euclidean,2\n0.1,0\n-0.2,0.3\n0.4,-0.1\n-0.3,-0.2\n"
             "0.2,0.4\n-0.1,0.1\n0.3,-0.3\n-0.4,0.2\n");
  const RunResult est = run("estimate --data cli_plane.csv --c 5.0");
  REQUIRE(est.exit_code == 0);
  const auto mean =
      nlohmann::json::parse(est.out)["results"]["mean"];
  std::ostringstream null_file;
  null_file << "rmm-v1,euclidean,2\n"
            << mean[0].get<double>() << "," << mean[1].get<double>() << "\n";
  write_file("cli_null.csv", null_file.str());

  const RunResult r =
      run("test --data cli_plane.csv --null-point cli_null.csv --c 5.0");
  REQUIRE(r.exit_code == 0);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["results"]["statistic_Tn"].get<double>() < 1e-10);
  CHECK(report["results"]["p_value"].get<double>() ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(report["results"]["reject"] == false);
  CHECK(report["results"]["df"] == 2);

  CHECK(run("test --data cli_plane.csv --null-point cli_null.csv --alpha 1.5")
            .exit_code == 2);
}

TEST_CASE("efficiency subcommand: target, grid, and usage errors") {
  const RunResult target = run("are --family gaussian-real --target 0.95");
  REQUIRE(target.exit_code == 0);
  const auto report = nlohmann::json::parse(target.out);
  CHECK(report["results"]["kappa"].get<double>() ==
        doctest::Approx(1.345).epsilon(0.004));
  CHECK(report["results"]["are"].get<double>() ==
        doctest::Approx(0.95).epsilon(0.001));

  const RunResult grid =
      run("are --family laplace-real --sigma 1 --kappa-grid 0.5:1.5:0.5");
  REQUIRE(grid.exit_code == 0);
  CHECK(grid.out.rfind("kappa,sigma,are\n", 0) == 0);
  CHECK(std::count(grid.out.begin(), grid.out.end(), '\n') == 4);  // header + 3

  CHECK(run("are --family cauchy-real --target 0.95").exit_code == 2);
  CHECK(run("are --family gaussian-real").exit_code == 2);
  CHECK(run("are --family gaussian-real --target 1.01").exit_code == 2);
  CHECK(run("are --family gaussian-real --kappa-grid 2:1:0.5").exit_code == 2);
}

TEST_CASE("breakdown study reports a placement-invariant bound") {
  const RunResult r = run("simulate --study breakdown --seed 11");
  REQUIRE(r.exit_code == 0);
  const auto rows = nlohmann::json::parse(r.out)["results"]["rows"];
  double huber_bound = -1.0;
  for (const auto& row : rows) {
    if (row["estimator"] == "huber_c1") {
      const double b = row["bound"].get<double>();
      if (huber_bound < 0) huber_bound = b;
      CHECK(b == doctest::Approx(huber_bound));
      CHECK(row["displacement"].get<double>() <= b);
    } else {
      // the unclipped mean follows the outliers without bound
      if (row["distance"].get<double>() >= 1e4)
        CHECK(row["displacement"].get<double>() > 1e3);
    }
  }
  CHECK(huber_bound > 0.0);
}

TEST_CASE("non-convergence exits with code 3") {
  write_file("cli_skewed.csv", "rmm-v1,euclidean,1\n0\n1\n3\n6\n");
  const RunResult r =
      run("estimate --data cli_skewed.csv --c 0.5 --max-iter 1 --tol 1e-15");
  CHECK(r.exit_code == 3);
  const auto report = nlohmann::json::parse(r.out);
  CHECK(report["results"]["converged"] == false);
}

TEST_CASE("usage and parse failures exit with code 2") {
  CHECK(run("estimate --data missing_file.csv").exit_code == 2);
  CHECK(run("estimate").exit_code == 2);                    // missing --data
  CHECK(run("nonsense-subcommand").exit_code == 2);
  CHECK(run("simulate --study unknown-study").exit_code == 2);
  write_file("cli_bad.csv", "rmm-v1,sphere,2\n0,0,2\n");
  CHECK(run("estimate --data cli_bad.csv --c 1").exit_code == 2);
}

int cli_main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: cli_tests <path-to-rmmean>\n");
    return 1;
  }
  g_rmmean = argv[1];
  doctest::Context ctx;
  ctx.applyCommandLine(argc - 1, argv + 1);
  return ctx.run();
}

int main(int argc, char** argv) { return cli_main(argc, argv); }
