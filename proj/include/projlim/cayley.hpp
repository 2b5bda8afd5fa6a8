#pragma once

#include <Eigen/Dense>
#include <random>
#include <utility>
#include <vector>

#include "projlim/expfam.hpp"
#include "projlim/permutation.hpp"

namespace projlim {

/**
 * Parameter of the tilted permutation family on S_n:
 *
 *   p(pi | theta) proportional to exp(-sum_{j>=2} theta_j W_j(pi))
 *
 * where W_j(pi) is the binary statistic of suffstat_w. Coordinate j = 1 is
 * dropped: W_1 is identically zero, so theta_1 would be unidentifiable and
 * its conjugate prior factor non-normalizable. theta(j-2) holds coordinate j;
 * size() + 1 is the group size n.
 */
struct CayleyTheta {
  Eigen::VectorXd theta;

  CayleyTheta() = default;
  explicit CayleyTheta(Eigen::VectorXd t) : theta(std::move(t)) {}
  static CayleyTheta zero(int n);

  int n() const { return static_cast<int>(theta.size()) + 1; }
  double coord(int j) const { return theta(j - 2); }  // j in 2..n
};

// P(W_j = 1) = (j-1) e^-t / (1 + (j-1) e^-t), in (0, 1) for finite t.
double bernoulli_q(int j, double theta_j);
Eigen::VectorXd bernoulli_q(const CayleyTheta& theta);  // entry j-2 for coord j

// Lossless reparameterization between theta and the Bernoulli probabilities.
CayleyTheta theta_from_q(const Eigen::VectorXd& q);

// log Z(theta) = sum_{j=2..n} log(1 + (j-1) e^-theta_j). Z factorizes per
// coordinate because the W_j are independent under the model.
double cayley_log_partition(const CayleyTheta& theta);

double cayley_loglik(const Permutation& pi, const CayleyTheta& theta);

// Exact pmf table over S_n in lexicographic one-line order. n <= 8. The
// total is checked to be 1 within 1e-12 before returning.
std::vector<std::pair<Permutation, double>> brute_force_pmf(
    const CayleyTheta& theta, int n);

/**
 * Sequential sampler: for j = 2..n draw W_j ~ Bernoulli(q_j(theta_j)); on
 * W_j = 0 element j opens its own cycle (k_j = j), otherwise k_j is uniform
 * on {1..j-1} and j is inserted after k_j. Draw order is fixed (ascending j,
 * Bernoulli before the insertion point), so output is a pure function of
 * (theta, n, engine state).
 */
Permutation sample_cayley(const CayleyTheta& theta, int n,
                          std::mt19937_64& rng);

// Conjugate prior over theta with density per coordinate proportional to
//   exp(gamma_j t - lambda log(1 + (j-1) e^-t)),
// proper exactly when lambda > 0 and -lambda < gamma_j < 0.
void validate_cayley_hyper(const ConjugateHyper& hyper);

// log of the prior normalizer, a product of 1-D integrals. Each factor is
// integrated over an interval grown until the analytic tail bounds drop below
// 1e-12 of the running total.
double cayley_prior_log_normalizer(const ConjugateHyper& hyper);

double cayley_prior_logpdf(const CayleyTheta& theta, const ConjugateHyper& hyper);

// (lambda + n, gamma_j - sum_obs W_j): the statistic is S = -W. The W totals
// are integers, so the update is exact and order-independent.
ConjugateHyper cayley_posterior(const ConjugateHyper& hyper,
                                const std::vector<Permutation>& observations);

// Per-coordinate inverse-CDF draw on a grid covering all but < 1e-10 of the
// coordinate's prior mass. Coordinates are drawn in ascending j order.
CayleyTheta sample_prior_theta(const ConjugateHyper& hyper,
                               std::mt19937_64& rng);

// Batch variant: builds each coordinate's table once and reuses it, and
// consumes the engine exactly like `count` successive single draws, so both
// paths produce identical output from the same starting state.
std::vector<CayleyTheta> sample_prior_theta(const ConjugateHyper& hyper,
                                            int count, std::mt19937_64& rng);

// theta_j = c log j + b for all j; gives the tail behavior q_j ~ e^-b j^(1-c),
// so sum q_j converges exactly when c > 2.
struct TailFamily {
  double c = 0.0;
  double b = 0.0;
  double theta_at(int j) const;
  double q_at(int j) const;
};

// Exponential-family view of the model; X = Permutation, statistic -W.
ExpFamSpec<Permutation> cayley_expfam_spec(int n);

}  // namespace projlim
