#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "projlim/checks.hpp"
#include "projlim/errors.hpp"

using namespace projlim;

namespace {

std::vector<std::string> serialize(const CheckSuiteResult& result) {
  std::vector<std::string> lines;
  for (const auto& r : result.reports) lines.push_back(to_json_line(r));
  return lines;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempFile {
  std::string path;
  explicit TempFile(const std::string& name) : path("/tmp/projlim_" + name) {}
  ~TempFile() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("report serialization round trip") {
  ProjectivityReport r = make_report(
      "gaussian", "posterior-oracle", "(1 2 3)", CheckMethod::monte_carlo,
      1.25e-11, 1e-8, "100 instances", 42u, "a note, with a comma");
  CHECK(r.pass);
  CHECK(report_from_json_line(to_json_line(r)) == r);

  // A failing report (deviation above tolerance) with no seed survives too.
  const ProjectivityReport failing =
      make_report("core", "projector-coherence", "S4<=S5<=S6",
                  CheckMethod::exact_enumeration, 0.3, 0.1, "1 triple");
  const ProjectivityReport back = report_from_json_line(to_json_line(failing));
  CHECK(back == failing);
  CHECK(!back.pass);
  CHECK(!back.seed.has_value());
}

TEST_CASE("csv layout") {
  const ProjectivityReport r =
      make_report("cayley", "encoding-bijection", "S5",
                  CheckMethod::exact_enumeration, 0.0, 0.0, "120 points");
  const std::string line = to_csv_line(r);
  CHECK(csv_header().substr(0, 5) == "model");
  CHECK(line.find("cayley") != std::string::npos);
  CHECK(line.find("encoding-bijection") != std::string::npos);
  // Same column count in header and row.
  const auto commas = [](const std::string& s) {
    long long c = 0;
    for (char ch : s) c += ch == ',';
    return c;
  };
  CHECK(commas(csv_header()) == commas(line));
}

TEST_CASE("export writes the advertised shapes") {
  TempFile csv("empty.csv"), jsonl("empty.jsonl"), full("full.jsonl");

  export_reports({}, csv.path, ExportFormat::csv);
  CHECK(slurp(csv.path) == csv_header() + "\n");

  export_reports({}, jsonl.path, ExportFormat::json_lines);
  CHECK(slurp(jsonl.path).empty());

  const ProjectivityReport r = make_report(
      "dirichlet", "posterior-commute", "{0|1}<={0 1}",
      CheckMethod::exact_enumeration, 0.0, 1e-12);
  export_reports({r, r}, full.path, ExportFormat::json_lines);
  CHECK(slurp(full.path) == to_json_line(r) + "\n" + to_json_line(r) + "\n");

  CHECK_THROWS_AS(export_reports({}, "/nonexistent/dir/out.csv",
                                 ExportFormat::csv),
                  config_error);
}

TEST_CASE("configuration validation") {
  ExperimentConfig ok;
  ok.model = "cayley";
  ok.check = "projectivity";
  CHECK_NOTHROW(validate_config(ok));

  ExperimentConfig bad = ok;
  bad.model = "ising";
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = ok;
  bad.check = "everything";
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = ok;
  bad.n = 9;  // group enumeration capability stops at 8
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = ok;
  bad.model = "gaussian";
  bad.n = 65;
  CHECK_THROWS_AS(validate_config(bad), config_error);

  bad = ok;
  bad.tol_override = 0.0;
  CHECK_THROWS_AS(validate_config(bad), config_error);
}

TEST_CASE("checks are reproducible for a fixed configuration") {
  ExperimentConfig config;
  config.model = "dirichlet";
  config.check = "commute";
  config.n = 3;
  config.seed = 7;

  const CheckSuiteResult a = run_check(config);
  const CheckSuiteResult b = run_check(config);
  CHECK(a.pass);
  CHECK(!a.reports.empty());
  CHECK(serialize(a) == serialize(b));
}

TEST_CASE("tolerance override tightens only approximate gates") {
  ExperimentConfig config;
  config.model = "gaussian";
  config.check = "projectivity";
  config.tol_override = 1e-15;

  const CheckSuiteResult result = run_check(config);
  CHECK(!result.pass);
  bool quadrature_failed = false;
  for (const auto& r : result.reports) {
    if (r.method == CheckMethod::quadrature) {
      CHECK(r.tolerance == 1e-15);
      quadrature_failed = quadrature_failed || !r.pass;
    }
    // Bitwise-exact gates keep tolerance zero and keep passing.
    if (r.tolerance == 0.0) CHECK(r.pass);
  }
  CHECK(quadrature_failed);
}

TEST_CASE("criterion registry") {
  CHECK(criterion_count() == 12);
  CHECK_THROWS_AS(run_criterion(0, 1), config_error);
  CHECK_THROWS_AS(run_criterion(13, 1), config_error);

  const CriterionResult encoding = run_criterion(1, kDefaultSeed);
  CHECK(encoding.id == 1);
  CHECK(encoding.pass);
  CHECK(!encoding.reports.empty());

  const CriterionResult composition = run_criterion(9, kDefaultSeed);
  CHECK(composition.pass);
  for (const auto& r : composition.reports)
    CHECK(r.check == "posterior-composition");
}
