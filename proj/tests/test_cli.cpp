#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "crnc/cli.hpp"
#include "crnc/parallel.hpp"
#include "crnc/report.hpp"

using namespace crnc;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("crnc_cli_" + name);
  return p;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({"parse", "ptm_full"}).code == kOk);
  CHECK(run({"parse", "no/such/file.crn"}).code == kUsage);
  CHECK(run({}).code == kUsage);
  CHECK(run({"frobnicate"}).code == kUsage);
  CHECK(run({"simulate", "ptm_full"}).code == kUsage);
  CHECK(run({"simulate", "ptm_full", "--experiment", "wobble"}).code == kUsage);
  CHECK(run({"simulate", "ptm_full", "--experiment", "rate", "--tol", "1e-2"}).code == kUsage);
  CHECK(run({"analyze", "ptm_full", "--candidate", "best"}).code == kUsage);
  CHECK(run({"certify", "ptm_simplified", "--candidate", "identity"}).code == kCheckFailed);
  CHECK(run({"fixtures", "verify"}).code == kOk);

  auto bad = scratch("bad.crn");
  std::ofstream(bad) << "A -> B\nA => C\n";
  Run r = run({"parse", bad.string()});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("line 2, column 3") != std::string::npos);
  std::filesystem::remove(bad);
}

TEST_CASE("jobs flag and environment") {
  CHECK(resolve_jobs(3) == 3);
  CHECK(resolve_jobs(0) == 1);
  ::setenv("CRNC_JOBS", "5", 1);
  CHECK(resolve_jobs(std::nullopt) == 5);
  CHECK(resolve_jobs(2) == 2);
  ::setenv("CRNC_JOBS", "zero", 1);
  CHECK_THROWS_AS(resolve_jobs(std::nullopt), std::invalid_argument);
  CHECK(run({"parse", "ptm_full"}).code == kUsage);
  ::setenv("CRNC_JOBS", "0", 1);
  CHECK_THROWS_AS(resolve_jobs(std::nullopt), std::invalid_argument);
  ::unsetenv("CRNC_JOBS");
  CHECK(resolve_jobs(std::nullopt) >= 1);
  CHECK(run({"-j", "2", "parse", "ptm_full"}).code == kOk);
  CHECK(run({"parse", "ptm_full", "--jobs", "2"}).code == kOk);
}

TEST_CASE("reports are byte identical across runs and job counts") {
  Run a = run({"-j", "1", "analyze", "ptm_full"});
  Run b = run({"-j", "4", "analyze", "ptm_full"});
  REQUIRE(a.code == kOk);
  CHECK(a.out == b.out);
  Run s1 = run({"-j", "1", "simulate", "ptm_simplified", "--experiment", "nonexpansivity", "--pairs", "6", "--seed", "9"});
  Run s2 = run({"-j", "3", "simulate", "ptm_simplified", "--experiment", "nonexpansivity", "--pairs", "6", "--seed", "9"});
  CHECK(s1.out == s2.out);
  Run s3 = run({"simulate", "ptm_simplified", "--experiment", "nonexpansivity", "--pairs", "6", "--seed", "10"});
  CHECK(s3.out != s1.out);
}

TEST_CASE("analyze report shape") {
  Run a = run({"analyze", "three_body"});
  REQUIRE(a.code == kOk);
  Json j = Json::parse(a.out);
  CHECK(j["network"]["n"].get<int>() > 0);
  CHECK(j["certificate"]["verified"].get<bool>());
  CHECK(j["siphons"]["persistent"].get<bool>());
  CHECK(j["weak_contractivity"]["theta_bar"] == "unbounded");
  CHECK(j["strict_contraction"]["diagonal_check"] == "holds");

  Run c = run({"certify", "ptm_full"});
  Json k = Json::parse(c.out);
  CHECK(k["weak_contractivity"]["S_zero"] == Json::array({1, 6}));
}

TEST_CASE("output files, series and plots") {
  auto json_path = scratch("sim.json"), svg_path = scratch("sim.svg"), csv_path = scratch("traj.csv");
  Run r = run({"simulate", "ptm_full", "--experiment", "rate", "--theta", "0.025", "--pairs", "4", "--series", "--plot",
               svg_path.string(), "-o", json_path.string()});
  CHECK(r.code == kOk);
  CHECK(r.out.empty());
  std::ifstream in(json_path);
  Json j = Json::parse(in);
  CHECK(j["result"]["times"].size() > 10);
  std::ifstream svg(svg_path);
  std::string head;
  std::getline(svg, head);
  CHECK(head.find("<svg") != std::string::npos);
  Run t = run({"integrate", "ptm_full", "--x0", "1,1,0,0,1,0", "--tspan", "2", "--csv", csv_path.string()});
  CHECK(t.code == kOk);
  CHECK(std::filesystem::file_size(csv_path) > 0);
  CHECK(run({"integrate", "ptm_full", "--x0", "1,1", "--csv", csv_path.string()}).code == kUsage);
  for (auto& p : {json_path, svg_path, csv_path}) std::filesystem::remove(p);
}

TEST_CASE("user candidate from a file") {
  auto c = scratch("C.txt");
  std::ofstream(c) << "# rows\n0 0 1 0 0 -1\n-1 1 1 0 0 0\n0 0 1 -1 1 0\n-1 1 0 0 0 1\n0 0 0 -1 1 1\n1 -1 0 -1 1 0\n";
  Run r = run({"certify", "ptm_full", "--candidate", "user:" + c.string()});
  CHECK(r.code == kOk);
  std::ofstream(c) << "1 2\n";
  CHECK(run({"certify", "ptm_full", "--candidate", "user:" + c.string()}).code == kUsage);
  std::filesystem::remove(c);
}
