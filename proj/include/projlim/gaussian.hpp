#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "projlim/expfam.hpp"

namespace projlim {

inline constexpr int kMaxGaussianDim = 64;

// Gaussian marginal over an explicit coordinate set. coords are strictly
// increasing 1-based ids; mean and cov are indexed in that order.
struct GaussianMarginalParams {
  std::vector<int> coords;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
};

// Symmetry within 1e-10 and a successful Cholesky factorization.
void validate_gaussian_params(const GaussianMarginalParams& params);

// Restriction to a subset of coordinates; rows/columns are picked out, which
// is exactly marginalization for Gaussians.
GaussianMarginalParams gaussian_project(const GaussianMarginalParams& params,
                                        const std::vector<int>& coords_lo);

double gaussian_logpdf(const GaussianMarginalParams& params,
                       const Eigen::VectorXd& x);

Eigen::VectorXd sample_gaussian(const GaussianMarginalParams& params,
                                std::mt19937_64& rng);

/**
 * Posterior for the unit-noise regression model x^(k) = theta + eps^(k),
 * eps ~ N(0, I), given n full observation vectors. With
 * B = Sigma (Sigma + (1/n) I)^{-1} (computed by Cholesky solve, no explicit
 * inverse) the result is mean = m - B (m - xbar) and cov = (1/n) B. The
 * unscaled resolvent product B itself is n times the posterior covariance;
 * callers that want the discrepancy documented get it from
 * resolvent_scaling_gap below.
 */
GaussianMarginalParams gp_posterior_index(
    const GaussianMarginalParams& prior,
    const std::vector<Eigen::VectorXd>& observations);

/**
 * Independent route to the same posterior through the precision form:
 * cov = (Sigma^{-1} + n I)^{-1} and mean = cov (Sigma^{-1} m + n xbar).
 * Exists only to validate gp_posterior_index; keeps its own algebra.
 * A conditioning note is appended when the prior covariance is near
 * singular (condition number above 1e12).
 */
GaussianMarginalParams direct_bayes_oracle(const GaussianMarginalParams& prior,
                                           int n, const Eigen::VectorXd& xbar,
                                           std::string* conditioning_note = nullptr);

// Max-abs gap between the resolvent product B and n times the posterior
// covariance; certifies the 1/n scaling applied inside gp_posterior_index.
double resolvent_scaling_gap(const GaussianMarginalParams& prior, int n);

// Entry rule for covariances over arbitrary coordinate ids, with the
// declared trace bound used by the concentration check (empty = unbounded).
struct CovarianceSpec {
  std::string label;
  std::function<double(int, int)> entry;  // 1-based ids
  std::optional<double> trace_bound;
};

CovarianceSpec identity_cov();
CovarianceSpec diag_power_cov(double exponent, std::optional<double> bound);
CovarianceSpec squared_exp_cov(double scale, double lengthscale,
                               std::optional<double> bound);

GaussianMarginalParams marginal_from_spec(
    const CovarianceSpec& cov, const std::function<double(int)>& mean_rule,
    const std::vector<int>& coords);

struct TraceReport {
  int truncation;
  double partial_trace;
  std::optional<double> declared_bound;
  bool verdict;  // true iff a bound is declared and the partial trace obeys it
};

TraceReport trace_class_report(const CovarianceSpec& cov, int truncation);

// Exponential-family view of a single unit-noise observation in dimension d:
// statistic x, log partition |theta|^2 / 2. The conjugate prior is
// N(gamma / lambda, (1/lambda) I) with a closed-form normalizer.
ExpFamSpec<Eigen::VectorXd> whitenoise_expfam_spec(int dim);

}  // namespace projlim
