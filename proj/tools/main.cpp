// Command-line front end: verification suites, samplers, conjugate updates,
// and exact enumeration, all reading/writing JSON. Exit codes: 0 success,
// 1 a check ran and failed, 2 invalid flags or invalid input files.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "CLI11.hpp"
#include "json.hpp"
#include "projlim/cayley.hpp"
#include "projlim/checks.hpp"
#include "projlim/dirichlet.hpp"
#include "projlim/errors.hpp"
#include "projlim/gaussian.hpp"
#include "projlim/permutation.hpp"
#include "projlim/report.hpp"
#include "projlim/rng.hpp"

namespace {

using nlohmann::json;

json load_object(const std::string& path, const std::set<std::string>& allowed) {
  std::ifstream in(path);
  if (!in) throw projlim::config_error("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw projlim::config_error(path + ": " + e.what());
  }
  if (!j.is_object())
    throw projlim::config_error(path + ": top level must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!allowed.count(it.key()))
      throw projlim::config_error(path + ": unknown key \"" + it.key() + "\"");
  return j;
}

const json& require_key(const json& j, const std::string& key,
                        const std::string& path) {
  if (!j.contains(key))
    throw projlim::config_error(path + ": missing key \"" + key + "\"");
  return j.at(key);
}

double get_number(const json& j, const std::string& key,
                  const std::string& path) {
  const json& v = require_key(j, key, path);
  if (!v.is_number())
    throw projlim::config_error(path + ": \"" + key + "\" must be a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& key, const std::string& path) {
  const json& v = require_key(j, key, path);
  if (!v.is_number_integer())
    throw projlim::config_error(path + ": \"" + key + "\" must be an integer");
  return v.get<int>();
}

Eigen::VectorXd get_vector(const json& j, const std::string& key,
                           const std::string& path) {
  const json& v = require_key(j, key, path);
  if (!v.is_array())
    throw projlim::config_error(path + ": \"" + key + "\" must be an array");
  Eigen::VectorXd out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      throw projlim::config_error(path + ": \"" + key +
                                  "\" must contain numbers only");
    out(static_cast<int>(i)) = v[i].get<double>();
  }
  return out;
}

std::vector<int> get_int_vector(const json& j, const std::string& key,
                                const std::string& path) {
  const json& v = require_key(j, key, path);
  if (!v.is_array())
    throw projlim::config_error(path + ": \"" + key + "\" must be an array");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer())
      throw projlim::config_error(path + ": \"" + key +
                                  "\" must contain integers only");
    out.push_back(e.get<int>());
  }
  return out;
}

Eigen::MatrixXd get_matrix(const json& j, const std::string& key,
                           const std::string& path) {
  const json& v = require_key(j, key, path);
  if (!v.is_array() || v.empty())
    throw projlim::config_error(path + ": \"" + key +
                                "\" must be a non-empty array of rows");
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  Eigen::MatrixXd out(v.size(), cols);
  for (std::size_t r = 0; r < v.size(); ++r) {
    if (!v[r].is_array() || v[r].size() != cols)
      throw projlim::config_error(path + ": \"" + key +
                                  "\" rows must be equal-length arrays");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!v[r][c].is_number())
        throw projlim::config_error(path + ": \"" + key +
                                    "\" must contain numbers only");
      out(static_cast<int>(r), static_cast<int>(c)) = v[r][c].get<double>();
    }
  }
  return out;
}

std::string json_vec(const Eigen::VectorXd& v) {
  std::string s = "[";
  for (int i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += projlim::format_double(v(i));
  }
  return s + "]";
}

std::string json_mat(const Eigen::MatrixXd& m) {
  std::string s = "[";
  for (int r = 0; r < m.rows(); ++r) {
    if (r) s += ",";
    s += json_vec(m.row(r));
  }
  return s + "]";
}

std::string json_int_vec(const std::vector<int>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(v[i]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------

projlim::GaussianMarginalParams read_gaussian_params(const std::string& path) {
  const json j = load_object(path, {"coords", "mean", "cov"});
  projlim::GaussianMarginalParams p;
  p.mean = get_vector(j, "mean", path);
  p.cov = get_matrix(j, "cov", path);
  if (p.cov.rows() != p.mean.size() || p.cov.cols() != p.mean.size())
    throw projlim::config_error(
        path + ": dimension mismatch, cov must be " +
        std::to_string(p.mean.size()) + " x " + std::to_string(p.mean.size()));
  if (j.contains("coords")) {
    p.coords = get_int_vector(j, "coords", path);
  } else {
    p.coords.resize(p.mean.size());
    for (int i = 0; i < p.mean.size(); ++i) p.coords[i] = i + 1;
  }
  projlim::validate_gaussian_params(p);
  return p;
}

int do_verify(const std::string& check, const std::string& model, int n,
              std::uint64_t seed, std::optional<double> tol,
              const std::string& out_path) {
  projlim::CheckSuiteResult result;
  if (check == "all") {
    if (!model.empty())
      throw projlim::config_error("verify all runs every model; drop --model");
    if (n != 0 || tol)
      throw projlim::config_error(
          "verify all uses the pinned default sizes and tolerances");
    result = projlim::run_full_suite(seed);
  } else {
    if (model.empty())
      throw projlim::config_error("verify " + check + " needs --model");
    projlim::ExperimentConfig config;
    config.check = check;
    config.model = model;
    config.n = n;
    config.seed = seed;
    config.tol_override = tol;
    result = projlim::run_check(config);
  }

  for (const auto& r : result.reports)
    std::cout << projlim::to_json_line(r) << "\n";
  std::cout.flush();

  if (!out_path.empty()) {
    const bool csv = out_path.size() >= 4 &&
                     out_path.compare(out_path.size() - 4, 4, ".csv") == 0;
    projlim::export_reports(result.reports, out_path,
                            csv ? projlim::ExportFormat::csv
                                : projlim::ExportFormat::json_lines);
  }

  std::cerr << result.label << ": " << result.reports.size() << " checks, "
            << (result.pass ? "pass" : "FAIL") << ", "
            << result.seconds << " s\n";
  return result.pass ? 0 : 1;
}

int do_sample(const std::string& model, const std::string& params_path, int n,
              int count, std::uint64_t seed) {
  if (count < 1) throw projlim::config_error("--count must be at least 1");
  auto rng = projlim::make_rng(seed);

  if (model == "cayley") {
    int size = n;
    Eigen::VectorXd theta;
    bool draw_theta = false;
    projlim::ConjugateHyper hyper;
    if (!params_path.empty()) {
      const json j =
          load_object(params_path, {"n", "theta", "lambda", "gamma"});
      if (j.contains("n")) {
        const int file_n = get_int(j, "n", params_path);
        if (size != 0 && size != file_n)
          throw projlim::config_error("--n disagrees with \"n\" in " +
                                      params_path);
        size = file_n;
      }
      if (j.contains("theta") && (j.contains("lambda") || j.contains("gamma")))
        throw projlim::config_error(
            params_path + ": give either \"theta\" or a prior "
                          "(\"lambda\", \"gamma\"), not both");
      if (j.contains("theta")) {
        theta = get_vector(j, "theta", params_path);
      } else if (j.contains("lambda") || j.contains("gamma")) {
        hyper.lambda = get_number(j, "lambda", params_path);
        hyper.gamma = get_vector(j, "gamma", params_path);
        draw_theta = true;
      }
    }
    if (size == 0)
      throw projlim::config_error("cayley sampling needs --n or \"n\"");
    if (size < 1) throw projlim::config_error("n must be at least 1");
    if (draw_theta) {
      if (hyper.gamma.size() != size - 1)
        throw projlim::config_error(params_path +
                                    ": \"gamma\" must have n - 1 entries");
      for (const auto& t : projlim::sample_prior_theta(hyper, count, rng))
        std::cout << "{\"theta\":" << json_vec(t.theta) << "}\n";
      return 0;
    }
    if (theta.size() == 0) theta = Eigen::VectorXd::Zero(size - 1);
    if (theta.size() != size - 1)
      throw projlim::config_error(params_path +
                                  ": \"theta\" must have n - 1 entries");
    const projlim::CayleyTheta ct{theta};
    for (int i = 0; i < count; ++i)
      std::cout << "{\"pi\":"
                << json_int_vec(
                       projlim::sample_cayley(ct, size, rng).one_line())
                << "}\n";
    return 0;
  }

  if (model == "dirichlet") {
    if (params_path.empty())
      throw projlim::config_error("dirichlet sampling needs --params");
    const json j = load_object(params_path, {"concentration"});
    const Eigen::VectorXd params =
        get_vector(j, "concentration", params_path);
    projlim::validate_dirichlet_params(params);
    for (int i = 0; i < count; ++i) {
      const auto [theta, cell] =
          projlim::sample_dirichlet_multinomial(params, rng);
      std::cout << "{\"theta\":" << json_vec(theta) << ",\"cell\":" << cell
                << "}\n";
    }
    return 0;
  }

  if (model == "gaussian") {
    if (params_path.empty())
      throw projlim::config_error("gaussian sampling needs --params");
    const projlim::GaussianMarginalParams p = read_gaussian_params(params_path);
    for (int i = 0; i < count; ++i)
      std::cout << "{\"x\":" << json_vec(projlim::sample_gaussian(p, rng))
                << "}\n";
    return 0;
  }

  throw projlim::config_error("unknown model tag: " + model);
}

int do_posterior(const std::string& model, const std::string& hyper_path,
                 const std::string& data_path) {
  if (model == "dirichlet") {
    const json h = load_object(hyper_path, {"alpha", "base_weights"});
    const double alpha = get_number(h, "alpha", hyper_path);
    const projlim::AtomBase base(get_vector(h, "base_weights", hyper_path));
    const json d = load_object(data_path, {"atoms"});
    const std::vector<int> atoms = get_int_vector(d, "atoms", data_path);
    const projlim::DpPosterior post = projlim::dp_posterior(base, alpha, atoms);
    std::cout << "{\"alpha\":" << projlim::format_double(post.alpha)
              << ",\"weights\":" << json_vec(post.weights) << "}\n";
    return 0;
  }

  if (model == "gaussian") {
    const projlim::GaussianMarginalParams prior =
        read_gaussian_params(hyper_path);
    const json d = load_object(data_path, {"observations"});
    const json& rows = require_key(d, "observations", data_path);
    if (!rows.is_array())
      throw projlim::config_error(data_path +
                                  ": \"observations\" must be an array");
    std::vector<Eigen::VectorXd> obs;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!rows[r].is_array())
        throw projlim::config_error(data_path +
                                    ": each observation must be an array");
      Eigen::VectorXd x(rows[r].size());
      for (std::size_t c = 0; c < rows[r].size(); ++c) {
        if (!rows[r][c].is_number())
          throw projlim::config_error(data_path +
                                      ": observations must be numeric");
        x(static_cast<int>(c)) = rows[r][c].get<double>();
      }
      if (x.size() != prior.mean.size())
        throw projlim::config_error(
            data_path + ": dimension mismatch, observation " +
            std::to_string(r) + " has length " + std::to_string(x.size()) +
            " but the prior dimension is " +
            std::to_string(prior.mean.size()));
      obs.push_back(std::move(x));
    }
    const projlim::GaussianMarginalParams post =
        projlim::gp_posterior_index(prior, obs);
    std::cout << "{\"coords\":" << json_int_vec(post.coords)
              << ",\"mean\":" << json_vec(post.mean)
              << ",\"cov\":" << json_mat(post.cov) << "}\n";
    return 0;
  }

  if (model == "cayley") {
    const json h = load_object(hyper_path, {"n", "lambda", "gamma"});
    const int n = get_int(h, "n", hyper_path);
    projlim::ConjugateHyper hyper;
    hyper.lambda = get_number(h, "lambda", hyper_path);
    hyper.gamma = get_vector(h, "gamma", hyper_path);
    if (n < 1 || hyper.gamma.size() != n - 1)
      throw projlim::config_error(hyper_path +
                                  ": \"gamma\" must have n - 1 entries");
    const json d = load_object(data_path, {"permutations"});
    const json& rows = require_key(d, "permutations", data_path);
    if (!rows.is_array())
      throw projlim::config_error(data_path +
                                  ": \"permutations\" must be an array");
    std::vector<projlim::Permutation> obs;
    for (const auto& row : rows) {
      if (!row.is_array())
        throw projlim::config_error(
            data_path + ": each permutation must be a one-line array");
      std::vector<int> img;
      for (const auto& e : row) {
        if (!e.is_number_integer())
          throw projlim::config_error(data_path +
                                      ": permutations must be integer arrays");
        img.push_back(e.get<int>());
      }
      if (static_cast<int>(img.size()) != n)
        throw projlim::config_error(
            data_path + ": dimension mismatch, permutation has length " +
            std::to_string(img.size()) + " but n is " + std::to_string(n));
      obs.emplace_back(img);
    }
    const projlim::ConjugateHyper post = projlim::cayley_posterior(hyper, obs);
    std::cout << "{\"lambda\":" << projlim::format_double(post.lambda)
              << ",\"gamma\":" << json_vec(post.gamma) << "}\n";
    return 0;
  }

  throw projlim::config_error("unknown model tag: " + model);
}

int do_enumerate(const std::string& model, int n,
                 const std::string& theta_path) {
  if (model != "cayley")
    throw projlim::config_error("enumerate supports --model cayley only");
  if (n < 1 || n > projlim::kMaxEnumerationN)
    throw projlim::config_error("enumerate needs 1 <= n <= " +
                                std::to_string(projlim::kMaxEnumerationN));
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(n - 1);
  if (!theta_path.empty()) {
    const json j = load_object(theta_path, {"theta"});
    theta = get_vector(j, "theta", theta_path);
    if (theta.size() != n - 1)
      throw projlim::config_error(theta_path +
                                  ": \"theta\" must have n - 1 entries");
  }
  for (const auto& [pi, p] :
       projlim::brute_force_pmf(projlim::CayleyTheta{theta}, n))
    std::cout << "{\"pi\":" << json_int_vec(pi.one_line())
              << ",\"p\":" << projlim::format_double(p) << "}\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"conjugate Bayesian models on projective systems"};
  app.require_subcommand(1);

  auto* verify = app.add_subcommand(
      "verify", "run a verification suite and report deviations");
  std::string v_check;
  verify->add_option("check", v_check,
                     "projectivity | commute | sufficiency | composition | "
                     "concentration | sampler-vs-oracle | all")
      ->required();
  std::string v_model;
  verify->add_option("--model", v_model, "dirichlet | gaussian | cayley");
  int v_n = 0;
  verify->add_option("--n", v_n, "size override (model-specific)");
  std::uint64_t v_seed = projlim::kDefaultSeed;
  verify->add_option("--seed", v_seed, "base seed");
  double v_tol = 0.0;
  auto* tol_opt =
      verify->add_option("--tol", v_tol,
                         "tolerance override; replaces every positive "
                         "default tolerance, never the exact (0) gates");
  std::string v_out;
  verify->add_option("--out", v_out,
                     "also write reports to this path (.csv for CSV, "
                     "anything else for JSON lines)");

  auto* sample = app.add_subcommand("sample", "draw from a model");
  std::string s_model;
  sample->add_option("--model", s_model, "dirichlet | gaussian | cayley")
      ->required();
  std::string s_params;
  sample->add_option("--params", s_params, "JSON parameter file");
  int s_n = 0;
  sample->add_option("--n", s_n, "group size (cayley without --params)");
  int s_count = 1;
  sample->add_option("--count", s_count, "number of draws");
  std::uint64_t s_seed = projlim::kDefaultSeed;
  sample->add_option("--seed", s_seed, "seed");

  auto* posterior =
      app.add_subcommand("posterior", "conjugate update from a data file");
  std::string p_model;
  posterior->add_option("--model", p_model, "dirichlet | gaussian | cayley")
      ->required();
  std::string p_hyper;
  posterior->add_option("--hyper", p_hyper, "JSON hyperparameter file")
      ->required();
  std::string p_data;
  posterior->add_option("--data", p_data, "JSON data file")->required();

  auto* enumerate =
      app.add_subcommand("enumerate", "exact pmf table over a full group");
  std::string e_model;
  enumerate->add_option("--model", e_model, "cayley")->required();
  int e_n = 0;
  enumerate->add_option("--n", e_n, "group size, at most 8")->required();
  std::string e_theta;
  enumerate->add_option("--theta", e_theta,
                        "JSON theta file; omitted means theta = 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (verify->parsed())
      return do_verify(v_check, v_model, v_n, v_seed,
                       tol_opt->count() ? std::optional<double>(v_tol)
                                        : std::nullopt,
                       v_out);
    if (sample->parsed())
      return do_sample(s_model, s_params, s_n, s_count, s_seed);
    if (posterior->parsed()) return do_posterior(p_model, p_hyper, p_data);
    if (enumerate->parsed()) return do_enumerate(e_model, e_n, e_theta);
  } catch (const projlim::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
