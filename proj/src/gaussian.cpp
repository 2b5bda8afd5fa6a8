#include "projlim/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace projlim {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

void check_coords(const std::vector<int>& coords) {
  if (coords.empty()) throw domain_error("empty coordinate set");
  if (static_cast<int>(coords.size()) > kMaxGaussianDim)
    throw capability_error("dimension above " +
                           std::to_string(kMaxGaussianDim));
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (coords[i] < 1 || (i > 0 && coords[i] <= coords[i - 1]))
      throw domain_error("coordinates must be strictly increasing and >= 1");
  }
}

Eigen::LLT<Eigen::MatrixXd> factorize(const Eigen::MatrixXd& m,
                                      const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw numeric_error(std::string(what) + " is not positive definite");
  return llt;
}

}  // namespace

void validate_gaussian_params(const GaussianMarginalParams& params) {
  check_coords(params.coords);
  const auto d = static_cast<Eigen::Index>(params.coords.size());
  if (params.mean.size() != d || params.cov.rows() != d ||
      params.cov.cols() != d)
    throw domain_error("mean/cov sizes do not match the coordinate set");
  if ((params.cov - params.cov.transpose()).cwiseAbs().maxCoeff() > 1e-10)
    throw domain_error("covariance is not symmetric within 1e-10");
  factorize(params.cov, "covariance");
}

GaussianMarginalParams gaussian_project(const GaussianMarginalParams& params,
                                        const std::vector<int>& coords_lo) {
  validate_gaussian_params(params);
  check_coords(coords_lo);
  std::vector<Eigen::Index> pos;
  for (int c : coords_lo) {
    const auto it =
        std::lower_bound(params.coords.begin(), params.coords.end(), c);
    if (it == params.coords.end() || *it != c)
      throw ordering_error("coordinate " + std::to_string(c) +
                           " is not part of the larger index set");
    pos.push_back(it - params.coords.begin());
  }
  GaussianMarginalParams out;
  out.coords = coords_lo;
  out.mean.resize(pos.size());
  out.cov.resize(pos.size(), pos.size());
  for (std::size_t i = 0; i < pos.size(); ++i) {
    out.mean(i) = params.mean(pos[i]);
    for (std::size_t j = 0; j < pos.size(); ++j)
      out.cov(i, j) = params.cov(pos[i], pos[j]);
  }
  return out;
}

double gaussian_logpdf(const GaussianMarginalParams& params,
                       const Eigen::VectorXd& x) {
  if (x.size() != params.mean.size()) throw domain_error("dimension mismatch");
  const auto llt = factorize(params.cov, "covariance");
  const Eigen::VectorXd diff = x - params.mean;
  const Eigen::VectorXd half = llt.matrixL().solve(diff);
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < params.cov.rows(); ++i)
    log_det += 2.0 * std::log(llt.matrixL()(i, i));
  return -0.5 * (params.mean.size() * kLog2Pi + log_det + half.squaredNorm());
}

Eigen::VectorXd sample_gaussian(const GaussianMarginalParams& params,
                                std::mt19937_64& rng) {
  validate_gaussian_params(params);
  std::normal_distribution<double> unit(0.0, 1.0);
  Eigen::VectorXd z(params.mean.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = unit(rng);
  const auto llt = factorize(params.cov, "covariance");
  return params.mean + Eigen::MatrixXd(llt.matrixL()) * z;
}

GaussianMarginalParams gp_posterior_index(
    const GaussianMarginalParams& prior,
    const std::vector<Eigen::VectorXd>& observations) {
  validate_gaussian_params(prior);
  const int n = static_cast<int>(observations.size());
  if (n < 1) throw domain_error("need at least one observation");
  const auto d = prior.mean.size();
  Eigen::VectorXd xbar = Eigen::VectorXd::Zero(d);
  for (const auto& x : observations) {
    if (x.size() != d)
      throw domain_error("observation dimension " + std::to_string(x.size()) +
                         " does not match the prior dimension " +
                         std::to_string(d));
    xbar += x;
  }
  xbar /= static_cast<double>(n);

  const Eigen::MatrixXd ridge =
      prior.cov + (1.0 / n) * Eigen::MatrixXd::Identity(d, d);
  // B = Sigma (Sigma + (1/n) I)^{-1}; solve the transposed system instead of
  // inverting. Sigma commutes with its own resolvent, so B is symmetric up
  // to roundoff; symmetrize to keep the factorization of the result honest.
  const auto llt = factorize(ridge, "ridge system");
  Eigen::MatrixXd b = llt.solve(prior.cov).transpose();
  b = (0.5 * (b + b.transpose())).eval();

  GaussianMarginalParams out;
  out.coords = prior.coords;
  out.mean = prior.mean - b * (prior.mean - xbar);
  out.cov = b / static_cast<double>(n);
  validate_gaussian_params(out);  // closure: posterior covariance is SPD
  return out;
}

GaussianMarginalParams direct_bayes_oracle(const GaussianMarginalParams& prior,
                                           int n, const Eigen::VectorXd& xbar,
                                           std::string* conditioning_note) {
  validate_gaussian_params(prior);
  if (n < 1) throw domain_error("need n >= 1");
  if (xbar.size() != prior.mean.size())
    throw domain_error("xbar dimension mismatch");
  const auto d = prior.mean.size();

  if (conditioning_note) {
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(prior.cov);
    const double cond = svd.singularValues()(0) /
                        svd.singularValues()(svd.singularValues().size() - 1);
    if (cond > 1e12)
      *conditioning_note = "prior covariance condition number " +
                           std::to_string(cond) + "; results may lose digits";
  }

  const Eigen::MatrixXd prior_precision =
      factorize(prior.cov, "prior covariance")
          .solve(Eigen::MatrixXd::Identity(d, d));
  const Eigen::MatrixXd post_precision =
      prior_precision + n * Eigen::MatrixXd::Identity(d, d);
  const auto llt = factorize(post_precision, "posterior precision");
  Eigen::MatrixXd cov = llt.solve(Eigen::MatrixXd::Identity(d, d));
  cov = (0.5 * (cov + cov.transpose())).eval();

  GaussianMarginalParams out;
  out.coords = prior.coords;
  out.cov = cov;
  out.mean = cov * (prior_precision * prior.mean + double(n) * xbar);
  return out;
}

double resolvent_scaling_gap(const GaussianMarginalParams& prior, int n) {
  validate_gaussian_params(prior);
  const auto d = prior.mean.size();
  const Eigen::MatrixXd ridge =
      prior.cov + (1.0 / n) * Eigen::MatrixXd::Identity(d, d);
  const Eigen::MatrixXd b =
      factorize(ridge, "ridge system").solve(prior.cov).transpose();
  const GaussianMarginalParams post =
      direct_bayes_oracle(prior, n, prior.mean);
  return (b - double(n) * post.cov).cwiseAbs().maxCoeff();
}

CovarianceSpec identity_cov() {
  return {"identity", [](int i, int j) { return i == j ? 1.0 : 0.0; },
          std::nullopt};
}

CovarianceSpec diag_power_cov(double exponent, std::optional<double> bound) {
  return {"diag j^-" + std::to_string(exponent),
          [exponent](int i, int j) {
            return i == j ? std::pow(static_cast<double>(i), -exponent) : 0.0;
          },
          bound};
}

CovarianceSpec squared_exp_cov(double scale, double lengthscale,
                               std::optional<double> bound) {
  return {"squared-exponential",
          [scale, lengthscale](int i, int j) {
            const double d = (i - j) / lengthscale;
            return scale * std::exp(-0.5 * d * d);
          },
          bound};
}

GaussianMarginalParams marginal_from_spec(
    const CovarianceSpec& cov, const std::function<double(int)>& mean_rule,
    const std::vector<int>& coords) {
  check_coords(coords);
  GaussianMarginalParams out;
  out.coords = coords;
  const auto d = static_cast<Eigen::Index>(coords.size());
  out.mean.resize(d);
  out.cov.resize(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    out.mean(i) = mean_rule(coords[i]);
    for (Eigen::Index j = 0; j < d; ++j)
      out.cov(i, j) = cov.entry(coords[i], coords[j]);
  }
  return out;
}

TraceReport trace_class_report(const CovarianceSpec& cov, int truncation) {
  if (truncation < 1) throw domain_error("truncation must be >= 1");
  double partial = 0.0;
  for (int j = 1; j <= truncation; ++j) partial += cov.entry(j, j);
  TraceReport report;
  report.truncation = truncation;
  report.partial_trace = partial;
  report.declared_bound = cov.trace_bound;
  report.verdict = cov.trace_bound.has_value() && partial <= *cov.trace_bound;
  return report;
}

ExpFamSpec<Eigen::VectorXd> whitenoise_expfam_spec(int dim) {
  if (dim < 1 || dim > kMaxGaussianDim)
    throw domain_error("dimension out of range");
  ExpFamSpec<Eigen::VectorXd> spec;
  spec.dim = dim;
  spec.suffstat = [dim](const Eigen::VectorXd& x) {
    if (x.size() != dim) throw domain_error("sample has wrong dimension");
    return x;
  };
  spec.log_base = [dim](const Eigen::VectorXd& x) {
    return -0.5 * (x.squaredNorm() + dim * kLog2Pi);
  };
  spec.log_partition = [](const Eigen::VectorXd& theta) {
    return 0.5 * theta.squaredNorm();
  };
  spec.enumerate_space = nullptr;
  spec.validate_hyper = [dim](const ConjugateHyper& h) {
    if (h.gamma.size() != dim)
      throw improper_prior_error("gamma has wrong dimension");
    if (!(h.lambda > 0))
      throw improper_prior_error("lambda must be positive");
  };
  spec.conj_logpdf = [dim](const Eigen::VectorXd& theta,
                           const ConjugateHyper& h) {
    // N(gamma / lambda, (1/lambda) I):
    // K = (2 pi / lambda)^(d/2) exp(|gamma|^2 / (2 lambda)).
    const double log_k = 0.5 * dim * (kLog2Pi - std::log(h.lambda)) +
                         h.gamma.squaredNorm() / (2.0 * h.lambda);
    return theta.dot(h.gamma) - 0.5 * h.lambda * theta.squaredNorm() - log_k;
  };
  return spec;
}

}  // namespace projlim
