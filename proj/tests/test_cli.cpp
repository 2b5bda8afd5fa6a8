#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

using nlohmann::json;

namespace {

std::string cli_path() {
  const char* p = std::getenv("PROJLIM_CLI");
  if (!p) throw std::runtime_error("PROJLIM_CLI is not set");
  return p;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

struct RunResult {
  int exit_code = -1;
  std::string out, err;
};

RunResult run(const std::string& args) {
  const std::string out_path = "/tmp/projlim_cli_out.txt";
  const std::string err_path = "/tmp/projlim_cli_err.txt";
  const std::string cmd = "\"" + cli_path() + "\" " + args + " >" + out_path +
                          " 2>" + err_path;
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(out_path);
  r.err = slurp(err_path);
  return r;
}

std::vector<json> parse_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

}  // namespace

TEST_CASE("verify: pass, fail, and misuse exit codes") {
  const RunResult ok = run("verify composition --model dirichlet");
  CHECK(ok.exit_code == 0);
  const std::vector<json> reports = parse_lines(ok.out);
  CHECK(!reports.empty());
  for (const json& r : reports) {
    CHECK(r.at("check") == "posterior-composition");
    CHECK(r.at("pass") == true);
  }

  // A tolerance override below quadrature accuracy turns a passing check
  // into a clean, reported failure.
  const RunResult fail = run("verify projectivity --model gaussian --tol 1e-15");
  CHECK(fail.exit_code == 1);
  bool saw_failure = false;
  for (const json& r : parse_lines(fail.out))
    saw_failure = saw_failure || r.at("pass") == false;
  CHECK(saw_failure);

  CHECK(run("verify all --model cayley").exit_code == 2);
  CHECK(run("verify projectivity").exit_code == 2);
}

TEST_CASE("invalid invocations exit 2") {
  CHECK(run("frobnicate").exit_code == 2);
  CHECK(run("verify composition --model dirichlet --bogus 3").exit_code == 2);
  CHECK(run("sample --model ising --n 4").exit_code == 2);
  CHECK(run("enumerate --model cayley --n 9").exit_code == 2);
  CHECK(run("--help").exit_code == 0);
}

TEST_CASE("sampling is reproducible for a fixed seed") {
  const std::string args = "sample --model cayley --n 5 --count 3 --seed 7";
  const RunResult a = run(args);
  const RunResult b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);

  const std::vector<json> draws = parse_lines(a.out);
  REQUIRE(draws.size() == 3);
  for (const json& d : draws) {
    const auto pi = d.at("pi").get<std::vector<int>>();
    REQUIRE(pi.size() == 5);
    std::vector<int> seen(5, 0);
    for (int v : pi) {
      REQUIRE(v >= 1);
      REQUIRE(v <= 5);
      seen[v - 1] += 1;
    }
    for (int c : seen) CHECK(c == 1);
  }
}

TEST_CASE("unknown JSON keys are rejected") {
  const std::string path = "/tmp/projlim_cli_badkey.json";
  write_file(path, "{\"n\":4,\"theta\":[0,0,0],\"typo\":1}");
  const RunResult r = run("sample --model cayley --params " + path);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("unknown key") != std::string::npos);
}

TEST_CASE("posterior updates through the command line") {
  const std::string hyper = "/tmp/projlim_cli_hyper.json";
  const std::string data = "/tmp/projlim_cli_data.json";

  write_file(hyper,
             "{\"alpha\":1.0,\"base_weights\":"
             "[0.3333333333333333,0.3333333333333333,0.3333333333333334]}");
  write_file(data, "{\"atoms\":[0,0,1]}");
  RunResult r = run("posterior --model dirichlet --hyper " + hyper +
                    " --data " + data);
  CHECK(r.exit_code == 0);
  json out = json::parse(r.out);
  CHECK(out.at("alpha").get<double>() == doctest::Approx(4.0));
  const auto w = out.at("weights").get<std::vector<double>>();
  REQUIRE(w.size() == 3);
  CHECK(w[0] == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
  CHECK(w[1] == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(w[2] == doctest::Approx(1.0 / 12.0).epsilon(1e-12));

  write_file(hyper, "{\"mean\":[1.0],\"cov\":[[2.0]]}");
  write_file(data, "{\"observations\":[[1.5],[2.5],[3.0],[1.0]]}");
  r = run("posterior --model gaussian --hyper " + hyper + " --data " + data);
  CHECK(r.exit_code == 0);
  out = json::parse(r.out);
  CHECK(out.at("coords") == json::array({1}));
  CHECK(out.at("mean")[0].get<double>() ==
        doctest::Approx(17.0 / 9.0).epsilon(1e-12));
  CHECK(out.at("cov")[0][0].get<double>() ==
        doctest::Approx(2.0 / 9.0).epsilon(1e-12));

  write_file(hyper, "{\"n\":3,\"lambda\":1.0,\"gamma\":[-0.5,-0.5]}");
  write_file(data, "{\"permutations\":[[2,1,3],[1,2,3]]}");
  r = run("posterior --model cayley --hyper " + hyper + " --data " + data);
  CHECK(r.exit_code == 0);
  out = json::parse(r.out);
  CHECK(out.at("lambda").get<double>() == 3.0);
  CHECK(out.at("gamma") == json::array({-1.5, -0.5}));
}

TEST_CASE("gaussian posterior rejects mismatched observation dimensions") {
  const std::string hyper = "/tmp/projlim_cli_ghyper.json";
  const std::string data = "/tmp/projlim_cli_gdata.json";
  write_file(hyper, "{\"mean\":[0.0,0.0],\"cov\":[[1.0,0.0],[0.0,1.0]]}");
  write_file(data, "{\"observations\":[[0.1,0.2],[0.3,0.4,0.5]]}");
  const RunResult r =
      run("posterior --model gaussian --hyper " + hyper + " --data " + data);
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("dimension") != std::string::npos);
}

TEST_CASE("enumerate prints the whole table") {
  const RunResult r = run("enumerate --model cayley --n 4");
  CHECK(r.exit_code == 0);
  const std::vector<json> rows = parse_lines(r.out);
  REQUIRE(rows.size() == 24);
  double total = 0.0;
  for (const json& row : rows) {
    // theta = 0 is uniform.
    CHECK(row.at("p").get<double>() ==
          doctest::Approx(1.0 / 24.0).epsilon(1e-12));
    total += row.at("p").get<double>();
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rows.front().at("pi") == json::array({1, 2, 3, 4}));
  CHECK(rows.back().at("pi") == json::array({4, 3, 2, 1}));
}
