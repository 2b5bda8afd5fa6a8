#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "projlim/errors.hpp"

namespace projlim {

/**
 * Hyperparameter of a canonical conjugate prior: a concentration lambda and a
 * vector gamma that must lie in the model's declared hull (the convex hull of
 * the sufficient-statistic image, scaled by lambda). Each model supplies the
 * hull test through its ExpFamSpec.
 */
struct ConjugateHyper {
  double lambda = 0.0;
  Eigen::VectorXd gamma;

  bool operator==(const ConjugateHyper& o) const {
    return lambda == o.lambda && gamma.size() == o.gamma.size() &&
           gamma == o.gamma;
  }
};

/**
 * An exponential family over sample type X:
 *
 *   log p(x | theta) = <suffstat(x), theta> + log_base(x) - log_partition(theta)
 *
 * enumerate_space is set for discrete models only and drives the exact
 * normalization and sufficiency checks. conj_logpdf evaluates the conjugate
 * prior density in the model's native parameter encoding (see each factory
 * for the encoding and the carrier measure it integrates against).
 */
template <class X>
struct ExpFamSpec {
  int dim = 0;
  std::function<Eigen::VectorXd(const X&)> suffstat;
  std::function<double(const X&)> log_base;
  std::function<double(const Eigen::VectorXd&)> log_partition;
  std::function<std::vector<X>()> enumerate_space;  // null for continuous
  std::function<void(const ConjugateHyper&)> validate_hyper;
  std::function<double(const Eigen::VectorXd&, const ConjugateHyper&)>
      conj_logpdf;
};

template <class X>
double expfam_logpdf(const ExpFamSpec<X>& spec, const X& x,
                     const Eigen::VectorXd& theta) {
  if (theta.size() != spec.dim)
    throw domain_error("theta has wrong dimension");
  if (!theta.allFinite()) throw domain_error("theta must be finite");
  const double log_z = spec.log_partition(theta);
  if (!std::isfinite(log_z))
    throw domain_error("log partition is not finite at theta");
  return spec.suffstat(x).dot(theta) + spec.log_base(x) - log_z;
}

template <class X>
double conjugate_prior_logpdf(const ExpFamSpec<X>& spec,
                              const Eigen::VectorXd& theta,
                              const ConjugateHyper& hyper) {
  spec.validate_hyper(hyper);  // throws improper_prior_error outside the hull
  return spec.conj_logpdf(theta, hyper);
}

/**
 * Conjugate update: n observations move (lambda, gamma) to
 * (lambda + n, gamma + sum_k suffstat(x_k)). The statistic total is
 * accumulated before touching gamma, so models with integer-valued
 * statistics update bit-for-bit identically under any observation order.
 */
template <class X>
ConjugateHyper posterior_update(const ConjugateHyper& hyper,
                                const std::vector<X>& observations,
                                const ExpFamSpec<X>& spec) {
  spec.validate_hyper(hyper);
  if (hyper.gamma.size() != spec.dim)
    throw domain_error("gamma has wrong dimension");
  Eigen::VectorXd total = Eigen::VectorXd::Zero(spec.dim);
  for (const X& x : observations) total += spec.suffstat(x);
  ConjugateHyper out;
  out.lambda = hyper.lambda + static_cast<double>(observations.size());
  out.gamma = hyper.gamma + total;
  spec.validate_hyper(out);  // closure under sampling
  return out;
}

template <class X>
struct PosteriorIndexFn {
  std::function<ConjugateHyper(const std::vector<X>&, const ConjugateHyper&)>
      update;
};

template <class X>
PosteriorIndexFn<X> make_posterior_index(const ExpFamSpec<X>& spec) {
  return PosteriorIndexFn<X>{
      [spec](const std::vector<X>& obs, const ConjugateHyper& h) {
        return posterior_update(h, obs, spec);
      }};
}

inline double hyper_deviation(const ConjugateHyper& a, const ConjugateHyper& b) {
  if (a.gamma.size() != b.gamma.size())
    throw domain_error("hyper dimension mismatch");
  double dev = std::abs(a.lambda - b.lambda);
  if (a.gamma.size() > 0)
    dev = std::max(dev, (a.gamma - b.gamma).cwiseAbs().maxCoeff());
  return dev;
}

/**
 * Deviation of the composition law: updating with obs_a then obs_b must match
 * a single update with the concatenation, and the update must not care about
 * observation order (probed with the reversed concatenation, which keeps the
 * check deterministic).
 */
template <class X>
double composition_deviation(const PosteriorIndexFn<X>& index,
                             const ConjugateHyper& hyper,
                             const std::vector<X>& obs_a,
                             const std::vector<X>& obs_b) {
  std::vector<X> all = obs_a;
  all.insert(all.end(), obs_b.begin(), obs_b.end());
  std::vector<X> reversed(all.rbegin(), all.rend());
  const ConjugateHyper batch = index.update(all, hyper);
  const ConjugateHyper chained = index.update(obs_b, index.update(obs_a, hyper));
  const ConjugateHyper shuffled = index.update(reversed, hyper);
  return std::max(hyper_deviation(chained, batch),
                  hyper_deviation(shuffled, batch));
}

template <class X>
bool check_composition(const PosteriorIndexFn<X>& index,
                       const ConjugateHyper& hyper, const std::vector<X>& obs_a,
                       const std::vector<X>& obs_b, double tol = 0.0) {
  return composition_deviation(index, hyper, obs_a, obs_b) <= tol;
}

}  // namespace projlim
