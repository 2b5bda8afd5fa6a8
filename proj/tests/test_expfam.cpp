#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <vector>

#include "projlim/dirichlet.hpp"
#include "projlim/expfam.hpp"
#include "projlim/gaussian.hpp"
#include "projlim/rng.hpp"

using namespace projlim;

namespace {
constexpr double kLog2Pi = 1.8378770664093454836;
}

TEST_CASE("multinomial: mean encoding reads back cell probabilities") {
  const auto spec = multinomial_expfam_spec(3);
  Eigen::Vector3d mean(0.5, 0.3, 0.2);
  const Eigen::VectorXd theta = natural_from_mean(mean);
  CHECK(std::abs(expfam_logpdf(spec, 1, theta) - std::log(0.3)) <= 1e-12);
  CHECK(std::abs(expfam_logpdf(spec, 0, theta) - std::log(0.5)) <= 1e-12);
}

TEST_CASE("multinomial: any natural parameter normalizes exactly") {
  const auto spec = multinomial_expfam_spec(4);
  auto rng = make_rng(31);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int t = 0; t < 10; ++t) {
    Eigen::VectorXd theta(4);
    for (int i = 0; i < 4; ++i) theta(i) = u(rng);
    double total = 0.0;
    for (int cell = 0; cell < 4; ++cell)
      total += std::exp(expfam_logpdf(spec, cell, theta));
    CHECK(std::abs(total - 1.0) <= 1e-12);
  }
}

TEST_CASE("dirichlet density: flat prior evaluates to zero log density") {
  CHECK(std::abs(dirichlet_logpdf(Eigen::Vector2d(1.0, 1.0),
                                  Eigen::Vector2d(0.5, 0.5))) <= 1e-13);
  // Dir(2, 1) at (0.7, 0.3): density theta_1 / B(2,1) = 0.7 / 0.5.
  CHECK(std::abs(dirichlet_logpdf(Eigen::Vector2d(2.0, 1.0),
                                  Eigen::Vector2d(0.7, 0.3)) -
                 std::log(1.4)) <= 1e-12);

  const auto spec = multinomial_expfam_spec(2);
  const ConjugateHyper flat{1.0, Eigen::Vector2d(1.0, 1.0)};
  CHECK(std::abs(conjugate_prior_logpdf(spec, Eigen::Vector2d(0.5, 0.5),
                                        flat)) <= 1e-13);
}

TEST_CASE("posterior update: empty data leaves the hyper unchanged") {
  const auto spec = multinomial_expfam_spec(2);
  const ConjugateHyper h{1.0, Eigen::Vector2d(0.5, 0.5)};
  CHECK(posterior_update(h, std::vector<int>{}, spec) == h);
}

TEST_CASE("posterior update: one categorical observation bumps its cell") {
  const auto spec = multinomial_expfam_spec(2);
  const ConjugateHyper h{1.0, Eigen::Vector2d(0.5, 0.5)};
  const ConjugateHyper post = posterior_update(h, std::vector<int>{0}, spec);
  CHECK(post.lambda == 2.0);
  CHECK(post.gamma(0) == 1.5);
  CHECK(post.gamma(1) == 0.5);
}

TEST_CASE("multinomial hull: gamma must be strictly positive") {
  const auto spec = multinomial_expfam_spec(2);
  ConjugateHyper bad{1.0, Eigen::Vector2d(0.0, 0.5)};
  CHECK_THROWS_AS(spec.validate_hyper(bad), improper_prior_error);
  ConjugateHyper negative{1.0, Eigen::Vector2d(-0.5, 0.5)};
  CHECK_THROWS_AS(spec.validate_hyper(negative), improper_prior_error);
}

TEST_CASE("white noise: log density matches the direct Gaussian formula") {
  const auto spec = whitenoise_expfam_spec(2);
  const Eigen::Vector2d x(1.0, -1.0), theta(0.5, 0.25);
  const double via_spec = expfam_logpdf(spec, Eigen::VectorXd(x),
                                        Eigen::VectorXd(theta));
  const double direct = -0.5 * (x - theta).squaredNorm() - kLog2Pi;
  CHECK(std::abs(via_spec - direct) <= 1e-12);
  CHECK(via_spec == doctest::Approx(-2.7441270664093455).epsilon(1e-14));
}

TEST_CASE("white noise: conjugate prior is the closed-form Gaussian") {
  const auto spec = whitenoise_expfam_spec(2);
  const ConjugateHyper h{2.0, Eigen::Vector2d(1.0, -1.0)};
  const Eigen::Vector2d theta(0.0, 0.0);
  // N(gamma / lambda, I / lambda) at theta:
  // -(d/2) log(2 pi / lambda) - (lambda/2) |theta - gamma/lambda|^2.
  const double direct = -kLog2Pi + std::log(2.0) - 0.5;
  CHECK(std::abs(conjugate_prior_logpdf(spec, Eigen::VectorXd(theta), h) -
                 direct) <= 1e-12);

  ConjugateHyper bad{0.0, Eigen::Vector2d(1.0, -1.0)};
  CHECK_THROWS_AS(spec.validate_hyper(bad), improper_prior_error);
}

TEST_CASE("white noise: update adds statistic totals") {
  const auto spec = whitenoise_expfam_spec(2);
  const ConjugateHyper h{1.0, Eigen::Vector2d(0.0, 0.0)};
  const std::vector<Eigen::VectorXd> obs{Eigen::Vector2d(1.0, 2.0),
                                         Eigen::Vector2d(3.0, -1.0)};
  const ConjugateHyper post = posterior_update(h, obs, spec);
  CHECK(post.lambda == 3.0);
  CHECK(post.gamma(0) == 4.0);
  CHECK(post.gamma(1) == 1.0);
}

TEST_CASE("composition and order invariance across split points") {
  const auto mspec = multinomial_expfam_spec(3);
  const ConjugateHyper mh{1.0, Eigen::Vector3d(0.5, 0.25, 0.25)};
  const std::vector<int> a{0, 1, 2, 0}, b{2, 2, 1};
  CHECK(composition_deviation(make_posterior_index(mspec), mh, a, b) == 0.0);

  const auto gspec = whitenoise_expfam_spec(2);
  auto rng = make_rng(32);
  std::normal_distribution<double> nd(0.0, 1.0);
  auto draw = [&] { return Eigen::VectorXd(Eigen::Vector2d(nd(rng), nd(rng))); };
  const ConjugateHyper gh{2.0, Eigen::Vector2d(0.3, -0.7)};
  const std::vector<Eigen::VectorXd> ga{draw(), draw()}, gb{draw(), draw()};
  CHECK(composition_deviation(make_posterior_index(gspec), gh, ga, gb) <=
        1e-10);
  CHECK(check_composition(make_posterior_index(gspec), gh, ga, gb, 1e-10));
}

TEST_CASE("input validation on the generic evaluator") {
  const auto spec = multinomial_expfam_spec(3);
  CHECK_THROWS_AS(expfam_logpdf(spec, 0, Eigen::Vector2d(0.0, 0.0)),
                  domain_error);
  Eigen::Vector3d inf_theta(0.0, 0.0, std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(expfam_logpdf(spec, 0, Eigen::VectorXd(inf_theta)),
                  domain_error);

  // The hull test runs first and already rejects a wrong-length gamma.
  const ConjugateHyper wrong_dim{1.0, Eigen::Vector2d(0.5, 0.5)};
  CHECK_THROWS_AS(posterior_update(wrong_dim, std::vector<int>{0}, spec),
                  improper_prior_error);
}

TEST_CASE("hyper deviation is the max over lambda and gamma gaps") {
  const ConjugateHyper a{1.0, Eigen::Vector2d(0.5, 0.5)};
  const ConjugateHyper b{1.5, Eigen::Vector2d(0.5, -0.5)};
  CHECK(hyper_deviation(a, b) == 1.0);
  CHECK(hyper_deviation(a, a) == 0.0);
  const ConjugateHyper c{1.0, Eigen::Vector3d(0.5, 0.5, 0.5)};
  CHECK_THROWS_AS(hyper_deviation(a, c), domain_error);
}
