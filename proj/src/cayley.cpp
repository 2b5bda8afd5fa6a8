#include "projlim/cayley.hpp"

#include <cmath>
#include <string>

#include "projlim/numeric.hpp"
#include "projlim/quadrature.hpp"

namespace projlim {

namespace {

void check_theta_size(const CayleyTheta& theta, int n) {
  if (theta.n() != n)
    throw domain_error("theta has " + std::to_string(theta.theta.size()) +
                       " coordinates, expected " + std::to_string(n - 1) +
                       " for S_" + std::to_string(n));
}

// Unnormalized per-coordinate prior log density at t for coordinate j.
double coord_prior_logpdf(int j, double lambda, double gamma_j, double t) {
  return gamma_j * t - lambda * softplus(std::log(j - 1.0) - t);
}

// Interval [c - r, c + r] around c = log(j-1) whose complement carries less
// than tail_rel of the coordinate's prior mass. The bounds are analytic:
// the integrand is below e^(gamma t) on the right and below
// (j-1)^-lambda e^((gamma+lambda) t) on the left.
std::pair<double, double> grown_interval(int j, double lambda, double gamma_j,
                                         double tail_rel) {
  const double c = std::log(j - 1.0);
  double r = 10.0;
  for (int iter = 0; iter < 24; ++iter) {
    const double body = integrate_1d(
        [&](double t) { return std::exp(coord_prior_logpdf(j, lambda, gamma_j, t)); },
        c - r, c + r, 1e-13);
    const double right = std::exp(gamma_j * (c + r)) / (-gamma_j);
    const double left = std::exp((gamma_j + lambda) * (c - r)) *
                        std::pow(j - 1.0, -lambda) / (gamma_j + lambda);
    if (right + left <= tail_rel * body) return {c - r, c + r};
    r *= 2.0;
  }
  throw numeric_error("prior tail did not fall below threshold; hyper too "
                      "close to the hull boundary");
}

double coord_prior_normalizer(int j, double lambda, double gamma_j) {
  const auto [lo, hi] = grown_interval(j, lambda, gamma_j, 1e-12);
  return integrate_1d(
      [&](double t) { return std::exp(coord_prior_logpdf(j, lambda, gamma_j, t)); },
      lo, hi, 1e-13);
}

}  // namespace

CayleyTheta CayleyTheta::zero(int n) {
  if (n < 1) throw domain_error("n must be >= 1");
  return CayleyTheta(Eigen::VectorXd::Zero(n - 1));
}

double bernoulli_q(int j, double theta_j) {
  if (j < 2) throw domain_error("coordinate index must be >= 2");
  return logistic(std::log(j - 1.0) - theta_j);
}

Eigen::VectorXd bernoulli_q(const CayleyTheta& theta) {
  Eigen::VectorXd q(theta.theta.size());
  for (int j = 2; j <= theta.n(); ++j) q(j - 2) = bernoulli_q(j, theta.coord(j));
  return q;
}

CayleyTheta theta_from_q(const Eigen::VectorXd& q) {
  Eigen::VectorXd theta(q.size());
  for (int i = 0; i < q.size(); ++i) {
    if (!(q(i) > 0.0 && q(i) < 1.0))
      throw domain_error("q coordinates must lie in (0,1)");
    const int j = i + 2;
    theta(i) = std::log(j - 1.0) + std::log1p(-q(i)) - std::log(q(i));
  }
  return CayleyTheta(std::move(theta));
}

double cayley_log_partition(const CayleyTheta& theta) {
  double log_z = 0.0;
  for (int j = 2; j <= theta.n(); ++j)
    log_z += softplus(std::log(j - 1.0) - theta.coord(j));
  return log_z;
}

double cayley_loglik(const Permutation& pi, const CayleyTheta& theta) {
  check_theta_size(theta, pi.size());
  const std::vector<int> w = suffstat_w(pi);
  double dot = 0.0;
  for (int j = 2; j <= pi.size(); ++j) dot += theta.coord(j) * w[j - 1];
  return -dot - cayley_log_partition(theta);
}

std::vector<std::pair<Permutation, double>> brute_force_pmf(
    const CayleyTheta& theta, int n) {
  check_theta_size(theta, n);
  std::vector<std::pair<Permutation, double>> table;
  double total = 0.0;
  for (const Permutation& pi : enumerate_sn(n)) {
    const double p = std::exp(cayley_loglik(pi, theta));
    total += p;
    table.emplace_back(pi, p);
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw numeric_error("pmf table sums to " + std::to_string(total));
  return table;
}

Permutation sample_cayley(const CayleyTheta& theta, int n,
                          std::mt19937_64& rng) {
  check_theta_size(theta, n);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> k(n);
  k[0] = 1;
  for (int j = 2; j <= n; ++j) {
    const bool w = unit(rng) < bernoulli_q(j, theta.coord(j));
    if (!w) {
      k[j - 1] = j;
    } else {
      std::uniform_int_distribution<int> pick(1, j - 1);
      k[j - 1] = pick(rng);
    }
  }
  return decode(PermutationEncoding{std::move(k)});
}

void validate_cayley_hyper(const ConjugateHyper& hyper) {
  if (!(hyper.lambda > 0))
    throw improper_prior_error("lambda must be positive");
  for (int i = 0; i < hyper.gamma.size(); ++i) {
    const double g = hyper.gamma(i);
    if (!(g > -hyper.lambda && g < 0))
      throw improper_prior_error(
          "gamma_" + std::to_string(i + 2) + " = " + std::to_string(g) +
          " outside (-lambda, 0); the prior does not normalize");
  }
}

double cayley_prior_log_normalizer(const ConjugateHyper& hyper) {
  validate_cayley_hyper(hyper);
  double log_k = 0.0;
  for (int i = 0; i < hyper.gamma.size(); ++i)
    log_k += std::log(coord_prior_normalizer(i + 2, hyper.lambda, hyper.gamma(i)));
  return log_k;
}

double cayley_prior_logpdf(const CayleyTheta& theta, const ConjugateHyper& hyper) {
  validate_cayley_hyper(hyper);
  if (theta.theta.size() != hyper.gamma.size())
    throw domain_error("theta and gamma dimensions differ");
  double val = hyper.gamma.dot(theta.theta) -
               hyper.lambda * cayley_log_partition(theta);
  return val - cayley_prior_log_normalizer(hyper);
}

ConjugateHyper cayley_posterior(const ConjugateHyper& hyper,
                                const std::vector<Permutation>& observations) {
  validate_cayley_hyper(hyper);
  const int n = static_cast<int>(hyper.gamma.size()) + 1;
  std::vector<long long> totals(hyper.gamma.size(), 0);
  for (const Permutation& pi : observations) {
    if (pi.size() != n)
      throw domain_error("observation size " + std::to_string(pi.size()) +
                         " does not match hyper for S_" + std::to_string(n));
    const std::vector<int> w = suffstat_w(pi);
    for (int j = 2; j <= n; ++j) totals[j - 2] += w[j - 1];
  }
  ConjugateHyper out;
  out.lambda = hyper.lambda + static_cast<double>(observations.size());
  out.gamma = hyper.gamma;
  for (int i = 0; i < out.gamma.size(); ++i)
    out.gamma(i) -= static_cast<double>(totals[i]);
  validate_cayley_hyper(out);
  return out;
}

std::vector<CayleyTheta> sample_prior_theta(const ConjugateHyper& hyper,
                                            int count, std::mt19937_64& rng) {
  validate_cayley_hyper(hyper);
  if (count < 0) throw domain_error("count must be nonnegative");
  std::vector<InverseCdfTable> tables;
  tables.reserve(hyper.gamma.size());
  for (int i = 0; i < hyper.gamma.size(); ++i) {
    const int j = i + 2;
    const auto [lo, hi] = grown_interval(j, hyper.lambda, hyper.gamma(i), 1e-10);
    tables.emplace_back(
        [&hyper, i, j](double t) {
          return coord_prior_logpdf(j, hyper.lambda, hyper.gamma(i), t);
        },
        lo, hi, 4097);
  }
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<CayleyTheta> draws;
  draws.reserve(count);
  for (int d = 0; d < count; ++d) {
    Eigen::VectorXd theta(hyper.gamma.size());
    for (int i = 0; i < hyper.gamma.size(); ++i)
      theta(i) = tables[i].draw(unit(rng));
    draws.emplace_back(std::move(theta));
  }
  return draws;
}

CayleyTheta sample_prior_theta(const ConjugateHyper& hyper,
                               std::mt19937_64& rng) {
  return sample_prior_theta(hyper, 1, rng).front();
}

double TailFamily::theta_at(int j) const { return c * std::log(j) + b; }

double TailFamily::q_at(int j) const { return bernoulli_q(j, theta_at(j)); }

ExpFamSpec<Permutation> cayley_expfam_spec(int n) {
  if (n < 2) throw domain_error("spec needs n >= 2");
  ExpFamSpec<Permutation> spec;
  spec.dim = n - 1;
  spec.suffstat = [n](const Permutation& pi) {
    if (pi.size() != n) throw domain_error("sample has wrong size");
    const std::vector<int> w = suffstat_w(pi);
    Eigen::VectorXd s(n - 1);
    for (int j = 2; j <= n; ++j) s(j - 2) = -static_cast<double>(w[j - 1]);
    return s;
  };
  spec.log_base = [](const Permutation&) { return 0.0; };
  spec.log_partition = [](const Eigen::VectorXd& theta) {
    return cayley_log_partition(CayleyTheta(theta));
  };
  spec.enumerate_space = [n]() { return enumerate_sn(n); };
  spec.validate_hyper = [](const ConjugateHyper& h) { validate_cayley_hyper(h); };
  spec.conj_logpdf = [](const Eigen::VectorXd& theta, const ConjugateHyper& h) {
    return cayley_prior_logpdf(CayleyTheta(theta), h);
  };
  return spec;
}

}  // namespace projlim
