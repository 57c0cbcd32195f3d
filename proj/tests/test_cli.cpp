#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "monoboot/cli.hpp"

using namespace monoboot;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(const std::vector<std::string> &args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return RunResult{code, out.str(), err.str()};
}

std::string slurp(const std::string &path) {
  std::ifstream in(path);
  REQUIRE(bool(in));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempFile {
  std::string path;
  TempFile(std::string p, const std::string &content) : path(std::move(p)) {
    std::ofstream out(path);
    out << content;
  }
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("estimate prints the Grenander value and dumps the hull") {
  const TempFile data("cli_data.txt", "1.0\n2.0\n4.0\n");
  const RunResult r = run_cli({"estimate", "--data", data.path, "--t0", "1.5",
                               "--hull-csv", "cli_hull.csv"});
  CHECK(r.code == 0);
  CHECK(r.out.find("0.333333") != std::string::npos);
  const std::string hull = slurp("cli_hull.csv");
  CHECK(hull.find("knot_x,knot_y") == 0);
  CHECK(hull.find("\n0,0\n2,") != std::string::npos);
  std::remove("cli_hull.csv");
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({"estimate", "--t0", "1.0"}).code == 2);  // missing --data
  CHECK(run_cli({"estimate", "--data", "x", "--t0", "1", "--bogus"}).code == 2);
  // stochastic commands demand a seed
  const TempFile data("cli_data2.txt", "1.0\n2.0\n4.0\n");
  CHECK(run_cli({"ci", "--data", data.path, "--t0", "1.0"}).code == 2);
  CHECK(run_cli({"chernoff", "--draws", "10"}).code == 2);
}

TEST_CASE("unreadable data files exit with code 2") {
  const RunResult r = run_cli(
      {"estimate", "--data", "no_such_file.txt", "--t0", "1.0"});
  CHECK(r.code == 2);
  CHECK(r.err.find("data error") != std::string::npos);
  CHECK(run_cli({"coverage", "--config", "no_such_config.json"}).code == 2);
  CHECK(run_cli({"histogram", "--input", "no_such_input.txt"}).code == 2);
}

TEST_CASE("help succeeds") {
  const RunResult r = run_cli({"--help"});
  CHECK(r.code == 0);
  CHECK(r.out.find("estimate") != std::string::npos);
  CHECK(r.out.find("chernoff") != std::string::npos);
}

TEST_CASE("ci emits a JSON record and a meta file") {
  std::ostringstream data;
  RngStream rng(6);
  for (int i = 0; i < 50; ++i) data << rng.exponential() << "\n";
  const TempFile f("cli_ci_data.txt", data.str());
  const RunResult r = run_cli({"ci", "--data", f.path, "--t0", "1.0", "--B",
                               "200", "--seed", "99", "--scheme", "npmle",
                               "--out", "cli_ci.json", "--meta",
                               "cli_ci_meta.json"});
  REQUIRE(r.code == 0);
  const auto rec = nlohmann::json::parse(slurp("cli_ci.json"));
  CHECK(rec["lo"].get<double>() <= rec["estimate"].get<double>());
  CHECK(rec["estimate"].get<double>() <= rec["hi"].get<double>());
  CHECK(rec["lo"].get<double>() >= 0.0);
  const auto meta = nlohmann::json::parse(slurp("cli_ci_meta.json"));
  CHECK(meta["config"]["seed"] == 99);
  CHECK(meta.contains("git"));
  CHECK(meta.contains("runtime_seconds"));
  std::remove("cli_ci.json");
  std::remove("cli_ci_meta.json");
}

TEST_CASE("chernoff output is byte-identical across reruns and threads") {
  auto run_once = [&](const std::string &out, const std::string &threads) {
    const RunResult r = run_cli({"chernoff", "--draws", "80", "--seed", "7",
                                 "--c", "3.0", "--delta", "0.01", "--threads",
                                 threads, "--out", out, "--meta",
                                 "cli_ch_meta.json"});
    REQUIRE(r.code == 0);
    return slurp(out);
  };
  const std::string a = run_once("cli_ch_a.csv", "1");
  const std::string b = run_once("cli_ch_b.csv", "4");
  CHECK(a == b);
  CHECK(a.find("draw\n") == 0);
  std::remove("cli_ch_a.csv");
  std::remove("cli_ch_b.csv");
  std::remove("cli_ch_meta.json");
}

TEST_CASE("coverage runs from a JSON config and writes its artifacts") {
  const TempFile cfg("cli_cov.json", R"({
    "model": "exp1", "t0": 1.0, "scheme": "edf",
    "sample_sizes": [25], "n_intervals": 20, "n_boot": 120,
    "master_seed": 3, "threads": 1
  })");
  const RunResult r = run_cli({"coverage", "--config", cfg.path, "--out-dir",
                               "."});
  REQUIRE(r.code == 0);
  const std::string csv = slurp("coverage.csv");
  CHECK(csv.find("n,coverage,mc_stderr,runtime_seconds") == 0);
  CHECK(csv.find("\n25,") != std::string::npos);
  const auto meta = nlohmann::json::parse(slurp("meta.json"));
  CHECK(meta["config"]["master_seed"] == 3);
  std::remove("coverage.csv");
  std::remove("meta.json");

  // master_seed is mandatory in configs
  const TempFile bad("cli_cov_bad.json",
                     R"({"sample_sizes": [25], "n_intervals": 5})");
  CHECK(run_cli({"coverage", "--config", bad.path}).code == 2);
}

TEST_CASE("track-quantiles writes one row per (n, scheme)") {
  const RunResult r = run_cli({"track-quantiles", "--sizes", "30", "60",
                               "--schemes", "edf", "npmle", "--B", "120",
                               "--seed", "4", "--out", "cli_tq.csv", "--meta",
                               "cli_tq_meta.json"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp("cli_tq.csv");
  CHECK(csv.find("n,scheme,q95") == 0);
  CHECK(csv.find("30,edf,") != std::string::npos);
  CHECK(csv.find("60,npmle,") != std::string::npos);
  std::remove("cli_tq.csv");
  std::remove("cli_tq_meta.json");
}

TEST_CASE("histogram subcommand round-trips a value file") {
  std::ostringstream data;
  for (int i = 0; i < 150; ++i) data << i * 0.01 << "\n";
  const TempFile f("cli_hist_in.txt", data.str());
  const RunResult r = run_cli({"histogram", "--input", f.path, "--bins", "5",
                               "--out", "cli_hist.csv"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp("cli_hist.csv");
  CHECK(csv.find("bin_left,bin_right,count,density") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  std::remove("cli_hist.csv");
}

TEST_CASE("limit subcommand writes the slope-pair CSV") {
  const RunResult r = run_cli({"limit", "--f", "1.0", "--fprime", "-2.0",
                               "--draws", "25", "--seed", "11", "--c", "3.0",
                               "--delta", "0.01", "--out", "cli_limit.csv",
                               "--meta", "cli_limit_meta.json"});
  REQUIRE(r.code == 0);
  const std::string csv = slurp("cli_limit.csv");
  CHECK(csv.find("slope_Z,slope_Z20") == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 26);
  // invalid f' is a runtime error, not a usage error
  const RunResult bad = run_cli({"limit", "--f", "1.0", "--fprime", "2.0",
                                 "--draws", "5", "--seed", "1"});
  CHECK(bad.code == 1);
  std::remove("cli_limit.csv");
  std::remove("cli_limit_meta.json");
}

TEST_CASE("check-model reports the regularity conditions") {
  const RunResult r = run_cli({"check-model", "--model", "exp1"});
  REQUIRE(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["model"] == "exp1");
  CHECK(j["alpha1_finite"] == false);
  CHECK(j["satisfied"] == false);
  CHECK(run_cli({"check-model", "--model", "cauchy"}).code == 1);
}
