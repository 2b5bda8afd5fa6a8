#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <vector>

#include "projlim/cayley.hpp"
#include "projlim/rng.hpp"

using namespace projlim;

namespace {

CayleyTheta random_theta(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  Eigen::VectorXd t(n - 1);
  for (int i = 0; i < n - 1; ++i) t(i) = u(rng);
  return CayleyTheta(t);
}

}  // namespace

TEST_CASE("theta = 0 gives the uniform law") {
  const CayleyTheta zero3 = CayleyTheta::zero(3);
  for (const Permutation& pi : enumerate_sn(3))
    CHECK(cayley_loglik(pi, zero3) == doctest::Approx(-std::log(6.0)).epsilon(1e-14));
  CHECK(cayley_log_partition(CayleyTheta::zero(5)) ==
        doctest::Approx(std::log(120.0)).epsilon(1e-14));

  const auto table = brute_force_pmf(CayleyTheta::zero(4), 4);
  REQUIRE(table.size() == 24);
  for (const auto& [pi, p] : table) CHECK(p == doctest::Approx(1.0 / 24).epsilon(1e-13));
  // Lexicographic ordering of the table.
  CHECK(table.front().first == Permutation::identity(4));
  CHECK(table.back().first == Permutation({4, 3, 2, 1}));
}

TEST_CASE("equal move indicators give equal log likelihoods, bitwise") {
  auto rng = make_rng(11);
  for (int n = 2; n <= 5; ++n) {
    const CayleyTheta theta = random_theta(n, rng);
    std::map<std::vector<int>, double> seen;
    for (const Permutation& pi : enumerate_sn(n)) {
      const double ll = cayley_loglik(pi, theta);
      auto [it, fresh] = seen.emplace(suffstat_w(pi), ll);
      if (!fresh) CHECK(ll == it->second);
    }
  }
}

TEST_CASE("exact normalization up to S7") {
  auto rng = make_rng(12);
  for (int n = 2; n <= 7; ++n) {
    const auto group = enumerate_sn(n);
    for (int t = 0; t < (n == 7 ? 3 : 5); ++t) {
      const CayleyTheta theta = random_theta(n, rng);
      double total = 0.0;
      for (const Permutation& pi : group)
        total += std::exp(cayley_loglik(pi, theta));
      CHECK(std::abs(total - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("pmf table marginals reproduce the Bernoulli parameters") {
  auto rng = make_rng(13);
  const int n = 5;
  const CayleyTheta theta = random_theta(n, rng);
  const Eigen::VectorXd q = bernoulli_q(theta);
  Eigen::VectorXd marginal = Eigen::VectorXd::Zero(n - 1);
  for (const auto& [pi, p] : brute_force_pmf(theta, n)) {
    const std::vector<int> w = suffstat_w(pi);
    for (int j = 2; j <= n; ++j)
      if (w[j - 1]) marginal(j - 2) += p;
  }
  CHECK((marginal - q).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("projected pmf table equals the lower-level table") {
  auto rng = make_rng(14);
  for (int hi = 3; hi <= 6; ++hi) {
    const CayleyTheta theta = random_theta(hi, rng);
    const CayleyTheta theta_lo{Eigen::VectorXd(theta.theta.head(hi - 2))};
    std::map<std::vector<int>, double> pushed;
    for (const auto& [pi, p] : brute_force_pmf(theta, hi))
      pushed[project_down(pi).one_line()] += p;
    for (const auto& [pi, p] : brute_force_pmf(theta_lo, hi - 1))
      CHECK(std::abs(pushed.at(pi.one_line()) - p) <= 1e-12);
  }
}

TEST_CASE("bernoulli parameters and the inverse reparameterization") {
  CHECK(bernoulli_q(2, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(bernoulli_q(4, 0.0) == doctest::Approx(0.75).epsilon(1e-15));
  // q stays inside (0, 1) for tilts past any practical range; only beyond
  // |theta| ~ 36 does the logistic saturate to the nearest double.
  CHECK(bernoulli_q(2, 700.0) > 0.0);
  CHECK(bernoulli_q(2, -30.0) < 1.0);
  CHECK(bernoulli_q(2, -700.0) == 1.0);

  auto rng = make_rng(15);
  const CayleyTheta theta = random_theta(6, rng);
  const CayleyTheta back = theta_from_q(bernoulli_q(theta));
  CHECK((back.theta - theta.theta).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("sampler is seed-stable and respects extreme tilts") {
  const CayleyTheta theta = CayleyTheta::zero(5);
  auto rng_a = make_rng(16);
  auto rng_b = make_rng(16);
  for (int i = 0; i < 50; ++i)
    CHECK(sample_cayley(theta, 5, rng_a) == sample_cayley(theta, 5, rng_b));

  // theta_j = 50 sends every insertion probability to ~1e-20: all draws
  // must come out as the identity.
  const CayleyTheta stiff{Eigen::VectorXd::Constant(4, 50.0)};
  auto rng = make_rng(17);
  for (int i = 0; i < 200; ++i)
    CHECK(sample_cayley(stiff, 5, rng) == Permutation::identity(5));
}

TEST_CASE("hyperparameter hull is enforced") {
  ConjugateHyper ok{1.0, Eigen::Vector2d(-0.5, -0.5)};
  CHECK_NOTHROW(validate_cayley_hyper(ok));

  ConjugateHyper positive{1.0, Eigen::Vector2d(0.1, -0.5)};
  CHECK_THROWS_AS(validate_cayley_hyper(positive), improper_prior_error);
  ConjugateHyper zero{1.0, Eigen::Vector2d(0.0, -0.5)};
  CHECK_THROWS_AS(validate_cayley_hyper(zero), improper_prior_error);
  ConjugateHyper below{1.0, Eigen::Vector2d(-1.0, -0.5)};
  CHECK_THROWS_AS(validate_cayley_hyper(below), improper_prior_error);
  ConjugateHyper bad_lambda{0.0, Eigen::Vector2d(-0.5, -0.5)};
  CHECK_THROWS_AS(validate_cayley_hyper(bad_lambda), improper_prior_error);
}

TEST_CASE("prior density is symmetric about log(j-1) at gamma = -lambda/2") {
  // With gamma_j = -lambda/2 the exponent gamma t - lambda softplus(c - t)
  // is symmetric under t -> 2c - t, c = log(j-1).
  const ConjugateHyper hyper{2.0, Eigen::Vector2d(-1.0, -1.0)};
  const double c2 = std::log(1.0), c3 = std::log(2.0);
  for (double d : {0.3, 1.0, 2.5}) {
    const CayleyTheta right{Eigen::Vector2d(c2 + d, c3 + d)};
    const CayleyTheta left{Eigen::Vector2d(c2 - d, c3 - d)};
    CHECK(std::abs(cayley_prior_logpdf(right, hyper) -
                   cayley_prior_logpdf(left, hyper)) <= 1e-10);
  }
}

TEST_CASE("prior sampler median sits at the symmetry point") {
  const ConjugateHyper hyper{2.0, Eigen::Vector2d(-1.0, -1.0)};
  auto rng = make_rng(18);
  const int draws = 100000;
  int below2 = 0, below3 = 0;
  for (const CayleyTheta& t : sample_prior_theta(hyper, draws, rng)) {
    if (t.coord(2) < std::log(1.0)) ++below2;
    if (t.coord(3) < std::log(2.0)) ++below3;
  }
  // Fraction below the median is Binomial(draws, 1/2); gate at 3 SE.
  const double se = std::sqrt(0.25 / draws);
  CHECK(std::abs(below2 / double(draws) - 0.5) <= 3 * se);
  CHECK(std::abs(below3 / double(draws) - 0.5) <= 3 * se);
}

TEST_CASE("prior mean moves monotonically with gamma") {
  auto mean_at = [](double gamma) {
    const ConjugateHyper hyper{2.0, Eigen::VectorXd::Constant(1, gamma)};
    auto rng = make_rng(19);
    double total = 0.0;
    const int draws = 20000;
    for (const CayleyTheta& t : sample_prior_theta(hyper, draws, rng))
      total += t.coord(2);
    return total / draws;
  };
  // gamma -> -lambda pushes mass toward -infinity.
  const double lo = mean_at(-1.5), mid = mean_at(-1.0), hi = mean_at(-0.5);
  CHECK(lo < mid);
  CHECK(mid < hi);
}

TEST_CASE("prior sampler is seed-stable and batch matches singles") {
  const ConjugateHyper hyper{1.0, Eigen::Vector2d(-0.5, -0.25)};
  auto rng_a = make_rng(20);
  auto rng_b = make_rng(20);
  const auto batch = sample_prior_theta(hyper, 5, rng_a);
  for (const CayleyTheta& b : batch) {
    const CayleyTheta single = sample_prior_theta(hyper, rng_b);
    CHECK(b.theta == single.theta);
  }
}

TEST_CASE("posterior update: worked example and closure") {
  const ConjugateHyper hyper{1.0, Eigen::Vector2d(-0.5, -0.5)};
  CHECK(cayley_posterior(hyper, {}) == hyper);

  // k = (1, 1, 3): element 2 joins 1's cycle, element 3 opens its own, so
  // W = (0, 1, 0) and only the j = 2 coordinate moves.
  const Permutation pi = decode(PermutationEncoding{{1, 1, 3}});
  CHECK(suffstat_w(pi) == std::vector<int>{0, 1, 0});
  const ConjugateHyper post = cayley_posterior(hyper, {pi});
  CHECK(post.lambda == 2.0);
  CHECK(post.gamma(0) == -1.5);
  CHECK(post.gamma(1) == -0.5);

  // Hull preservation: counts are at most the number of observations, so
  // gamma_j / lambda stays inside (-1, 0).
  auto rng = make_rng(21);
  std::vector<Permutation> obs;
  for (int i = 0; i < 10; ++i)
    obs.push_back(sample_cayley(CayleyTheta::zero(3), 3, rng));
  const ConjugateHyper big = cayley_posterior(hyper, obs);
  CHECK(big.lambda == 11.0);
  for (int i = 0; i < big.gamma.size(); ++i) {
    CHECK(big.gamma(i) / big.lambda > -1.0);
    CHECK(big.gamma(i) / big.lambda < 0.0);
  }

  ConjugateHyper broken{1.0, Eigen::Vector2d(0.5, -0.5)};
  CHECK_THROWS_AS(cayley_posterior(broken, {pi}), improper_prior_error);
}

TEST_CASE("exponential-family view matches the direct log likelihood") {
  auto rng = make_rng(22);
  const auto spec = cayley_expfam_spec(4);
  const CayleyTheta theta = random_theta(4, rng);
  for (const Permutation& pi : enumerate_sn(4))
    CHECK(std::abs(expfam_logpdf(spec, pi, theta.theta) -
                   cayley_loglik(pi, theta)) <= 1e-12);
}

TEST_CASE("tail family matches the Bernoulli parameterization") {
  const TailFamily fam{3.0, 0.25};
  for (int j : {2, 5, 40}) {
    CHECK(fam.theta_at(j) == doctest::Approx(3.0 * std::log(j) + 0.25));
    CHECK(fam.q_at(j) ==
          doctest::Approx(bernoulli_q(j, fam.theta_at(j))).epsilon(1e-14));
  }
}

TEST_CASE("enumeration capability bound on the pmf table") {
  CHECK_THROWS_AS(brute_force_pmf(CayleyTheta::zero(9), 9), capability_error);
}
