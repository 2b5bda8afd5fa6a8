#include "projlim/quadrature.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "projlim/errors.hpp"

namespace projlim {

double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol) {
  double err = 0.0;
  const double value =
      boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          f, a, b, 14, rel_tol, &err);
  if (!std::isfinite(value))
    throw numeric_error("integral is not finite");
  if (err > rel_tol * std::max(1.0, std::abs(value)) * 10)
    throw numeric_error("integral did not converge to requested tolerance");
  return value;
}

std::vector<double> make_grid(double lo, double hi, int nodes) {
  if (nodes < 2 || !(hi > lo))
    throw domain_error("grid needs nodes >= 2 and hi > lo");
  std::vector<double> g(nodes);
  const double h = (hi - lo) / (nodes - 1);
  for (int i = 0; i < nodes; ++i) g[i] = lo + i * h;
  g.back() = hi;
  return g;
}

InverseCdfTable::InverseCdfTable(const std::function<double(double)>& log_density,
                                 double lo, double hi, int nodes)
    : x_(make_grid(lo, hi, nodes)), cdf_(nodes, 0.0) {
  std::vector<double> logd(nodes);
  double peak = -HUGE_VAL;
  for (int i = 0; i < nodes; ++i) {
    logd[i] = log_density(x_[i]);
    peak = std::max(peak, logd[i]);
  }
  if (!std::isfinite(peak))
    throw numeric_error("density has no finite values on the grid");
  double acc = 0.0;
  for (int i = 1; i < nodes; ++i) {
    const double fa = std::exp(logd[i - 1] - peak);
    const double fb = std::exp(logd[i] - peak);
    acc += 0.5 * (fa + fb) * (x_[i] - x_[i - 1]);
    cdf_[i] = acc;
  }
  mass_ = acc * std::exp(peak);
  if (!(acc > 0)) throw numeric_error("density integrates to zero on the grid");
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;
}

double InverseCdfTable::draw(double u) const {
  u = std::clamp(u, 0.0, 1.0);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  const int hi = std::min<int>(static_cast<int>(it - cdf_.begin()),
                               static_cast<int>(cdf_.size()) - 1);
  const int lo = hi - 1;
  const double span = cdf_[hi] - cdf_[lo];
  if (span <= 0) return x_[lo];
  const double t = (u - cdf_[lo]) / span;
  return x_[lo] + t * (x_[hi] - x_[lo]);
}

}  // namespace projlim
