#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <tuple>
#include <vector>

#include "projlim/cayley.hpp"
#include "projlim/concentration.hpp"
#include "projlim/gaussian.hpp"
#include "projlim/projective.hpp"

using namespace projlim;

namespace {

// Integer-level family over the symmetric groups with repeated last-coordinate
// removal as the projection.
ProjectorFamily<int, Permutation> sn_family() {
  ProjectorFamily<int, Permutation> family;
  family.label = "symmetric groups";
  family.leq = [](const int& lo, const int& hi) { return lo <= hi; };
  family.project = [](const int& lo, const int& hi, const Permutation& pi) {
    Permutation out = pi;
    for (int m = hi; m > lo; --m) out = project_down(out);
    return out;
  };
  family.point_deviation = [](const Permutation& a, const Permutation& b) {
    return a == b ? 0.0 : 1.0;
  };
  family.index_label = [](const int& n) { return "S" + std::to_string(n); };
  return family;
}

MarginalModelFamily<int, Permutation, CayleyTheta> cayley_family() {
  MarginalModelFamily<int, Permutation, CayleyTheta> models;
  models.label = "tilted permutations";
  models.logpdf = [](const int&, const Permutation& pi,
                     const CayleyTheta& theta) {
    return cayley_loglik(pi, theta);
  };
  models.project_param = [](const int& lo, const int&,
                            const CayleyTheta& theta) {
    return CayleyTheta(theta.theta.head(lo - 1).eval());
  };
  models.project_point = [](const int& lo, const int& hi,
                            const Permutation& pi) {
    Permutation out = pi;
    for (int m = hi; m > lo; --m) out = project_down(out);
    return out;
  };
  models.enumerate_points = [](const int& n) { return enumerate_sn(n); };
  models.point_key = [](const Permutation& pi) {
    std::string key;
    for (int v : pi.one_line()) key += std::to_string(v) + ",";
    return key;
  };
  models.index_label = [](const int& n) { return "S" + std::to_string(n); };
  return models;
}

}  // namespace

TEST_CASE("projector coherence across three nested levels") {
  const auto family = sn_family();
  const auto points_at = [](const int& n) { return enumerate_sn(n); };

  const std::vector<std::tuple<int, int, int>> triples{{4, 5, 6}};
  const ProjectivityReport r = check_projector_coherence<int, Permutation>(
      family, triples, points_at, "cayley");
  CHECK(r.pass);
  CHECK(r.max_deviation == 0.0);
  CHECK(r.check == "projector-coherence");
  CHECK(r.pair == "S4<=S5<=S6");

  const std::vector<std::tuple<int, int, int>> bad{{5, 4, 6}};
  CHECK_THROWS_AS((check_projector_coherence<int, Permutation>(
                      family, bad, points_at, "cayley")),
                  ordering_error);
}

TEST_CASE("exact marginalization over permutation preimages") {
  const auto models = cayley_family();
  const CayleyTheta theta(Eigen::Vector3d(0.5, 1.0, -0.3));
  const ProjectivityReport r = verify_marginal_projectivity_exact(
      models, 3, 4, theta, 1e-12, "cayley");
  CHECK(r.pass);
  CHECK(r.max_deviation < 1e-12);
  CHECK(r.pair == "S3<=S4");

  auto no_enum = models;
  no_enum.enumerate_points = nullptr;
  CHECK_THROWS_AS(
      verify_marginal_projectivity_exact(no_enum, 3, 4, theta, 1e-12, "cayley"),
      capability_error);
}

TEST_CASE("statistic projection commutes with point projection") {
  const auto to_vec = [](const std::vector<int>& w) {
    Eigen::VectorXd out(w.size());
    for (std::size_t i = 0; i < w.size(); ++i) out(i) = w[i];
    return out;
  };
  const std::function<Eigen::VectorXd(const Permutation&)> w5 =
      [&](const Permutation& pi) { return to_vec(suffstat_w(pi)); };
  const std::function<Eigen::VectorXd(const Permutation&)> w4 = w5;
  const std::function<Permutation(const Permutation&)> drop =
      [](const Permutation& pi) { return project_down(pi); };
  const std::function<Eigen::VectorXd(const Eigen::VectorXd&)> stat_drop =
      [](const Eigen::VectorXd& w) { return w.head(w.size() - 1).eval(); };
  const std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>
      dev = vector_deviation;

  const ProjectivityReport r = verify_map_projectivity<
      Permutation, Permutation, Eigen::VectorXd, Eigen::VectorXd>(
      w5, w4, drop, stat_drop, dev, enumerate_sn(5), 0.0, "cayley",
      "S4<=S5 move indicators");
  CHECK(r.pass);
  CHECK(r.max_deviation == 0.0);
  CHECK(r.method == CheckMethod::exact_enumeration);
}

TEST_CASE("grid description string") {
  GridSpec grid;
  grid.lo = Eigen::Vector2d(-1.0, 0.0);
  grid.hi = Eigen::Vector2d(1.0, 2.0);
  grid.nodes = {5, 9};
  CHECK(grid.to_string() == "[-1,1]/5 x [0,2]/9");
}

TEST_CASE("quadrature marginalization of a correlated Gaussian") {
  GaussianMarginalParams p;
  p.coords = {1, 2};
  p.mean = Eigen::Vector2d(0.5, -0.5);
  p.cov = Eigen::Matrix2d{{1.0, 0.4}, {0.4, 2.0}};
  const GaussianMarginalParams q = gaussian_project(p, {1});

  GridSpec grid;
  grid.lo = Eigen::Vector2d(p.mean(0) - 4.0, p.mean(1) - 6.0 * std::sqrt(2.0));
  grid.hi = Eigen::Vector2d(p.mean(0) + 4.0, p.mean(1) + 6.0 * std::sqrt(2.0));
  grid.nodes = {21, 301};

  const ProjectivityReport r = verify_marginal_projectivity_quadrature(
      [&](const Eigen::VectorXd& x) { return gaussian_logpdf(p, x); },
      [&](const Eigen::VectorXd& x) { return gaussian_logpdf(q, x); }, {0},
      grid, 1e-4, "gaussian", "(1 2)<=(1)");
  CHECK(r.pass);
  CHECK(r.method == CheckMethod::quadrature);
  CHECK(r.sample_spec == grid.to_string());

  GridSpec broken = grid;
  broken.nodes = {21};
  CHECK_THROWS_AS(verify_marginal_projectivity_quadrature(
                      [](const Eigen::VectorXd&) { return 0.0; },
                      [](const Eigen::VectorXd&) { return 0.0; }, {0}, broken,
                      1e-4, "gaussian", "bad"),
                  domain_error);
  CHECK_THROWS_AS(verify_marginal_projectivity_quadrature(
                      [](const Eigen::VectorXd&) { return 0.0; },
                      [](const Eigen::VectorXd&) { return 0.0; }, {0, 1}, grid,
                      1e-4, "gaussian", "bad"),
                  domain_error);
}

TEST_CASE("vector deviation requires matching sizes") {
  CHECK(vector_deviation(Eigen::Vector2d(1.0, 2.0),
                         Eigen::Vector2d(1.0, 2.5)) == 0.5);
  CHECK_THROWS_AS(
      vector_deviation(Eigen::Vector2d::Zero(), Eigen::Vector3d::Zero()),
      domain_error);
}

TEST_CASE("tail declarations decide concentration, prefixes do not") {
  const ConcentrationReport summable =
      concentration_predicate(CayleyTailQuery{TailFamily{3.0, 0.0}, 10000});
  REQUIRE(summable.verdict.has_value());
  CHECK(*summable.verdict);
  REQUIRE(!summable.series.empty());
  CHECK(summable.series.back().first == 10000);
  // c = 3 tail: increments at j ~ 1/j^2, so the partial sum has converged to
  // several digits by 10^4.
  CHECK(summable.series.back().second < 1.0);

  const ConcentrationReport divergent =
      concentration_predicate(CayleyTailQuery{TailFamily{2.0, 0.0}, 1000});
  REQUIRE(divergent.verdict.has_value());
  CHECK(!*divergent.verdict);
  // c = 2 tail: increments ~ 1/j, so the partial sum tracks log j and keeps
  // growing; it passes 5 before j = 1000.
  CHECK(divergent.series.back().second > 5.0);

  const ConcentrationReport prefix = concentration_predicate(
      CayleyPrefixQuery{Eigen::VectorXd::Zero(9)});
  CHECK(!prefix.verdict.has_value());
  CHECK(prefix.reason.find("prefix") != std::string::npos);

  const ConcentrationReport dp =
      concentration_predicate(DpFiniteQuery{AtomBase(Eigen::Vector2d(0.4, 0.6))});
  REQUIRE(dp.verdict.has_value());
  CHECK(*dp.verdict);

  const ConcentrationReport trace = concentration_predicate(
      GpTraceQuery{diag_power_cov(2.0, 1.6449340668482264), 1000});
  REQUIRE(trace.verdict.has_value());
  CHECK(*trace.verdict);

  const ConcentrationReport flat =
      concentration_predicate(GpTraceQuery{identity_cov(), 100});
  REQUIRE(flat.verdict.has_value());
  CHECK(!*flat.verdict);
}
