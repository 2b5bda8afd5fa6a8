#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "projlim/errors.hpp"
#include "projlim/quadrature.hpp"
#include "projlim/report.hpp"

namespace projlim {

/**
 * A family of projections f_{hi,lo} between index levels, together with the
 * order relation that makes (lo, hi) admissible and a deviation functor on
 * points (0 means equal). The coherence law f_{K,I} = f_{J,I} after f_{K,J}
 * and the identity law f_{I,I} = id are checked pointwise by
 * check_projector_coherence.
 */
template <class Index, class Point>
struct ProjectorFamily {
  std::string label;
  std::function<bool(const Index&, const Index&)> leq;
  std::function<Point(const Index& lo, const Index& hi, const Point&)> project;
  std::function<double(const Point&, const Point&)> point_deviation;
  std::function<std::string(const Index&)> index_label;
};

template <class Index>
struct DirectedIndexPair {
  Index lo, hi;
};

template <class Index, class Point>
ProjectivityReport check_projector_coherence(
    const ProjectorFamily<Index, Point>& family,
    const std::vector<std::tuple<Index, Index, Index>>& triples,
    const std::function<std::vector<Point>(const Index&)>& points_at,
    const std::string& model, double tolerance = 0.0) {
  double max_dev = 0.0;
  long long checked = 0;
  std::string pair_label;
  for (const auto& [lo, mid, hi] : triples) {
    if (!family.leq(lo, mid) || !family.leq(mid, hi))
      throw ordering_error("triple is not ordered lo <= mid <= hi");
    if (pair_label.empty())
      pair_label = family.index_label(lo) + "<=" + family.index_label(mid) +
                   "<=" + family.index_label(hi);
    for (const Point& x : points_at(hi)) {
      const Point direct = family.project(lo, hi, x);
      const Point via_mid =
          family.project(lo, mid, family.project(mid, hi, x));
      max_dev = std::max(max_dev, family.point_deviation(direct, via_mid));
      const Point same = family.project(hi, hi, x);
      max_dev = std::max(max_dev, family.point_deviation(same, x));
      ++checked;
    }
  }
  return make_report(model, "projector-coherence", pair_label,
                     CheckMethod::exact_enumeration, max_dev, tolerance,
                     std::to_string(triples.size()) + " triples, " +
                         std::to_string(checked) + " points");
}

/**
 * Per-index conditional model: a log density/pmf, the parameter projector
 * g_{hi,lo}, the point projector f_{hi,lo}, and (for discrete models) an
 * exhaustive enumerator plus a point key for grouping preimages.
 */
template <class Index, class Point, class Theta>
struct MarginalModelFamily {
  std::string label;
  std::function<double(const Index&, const Point&, const Theta&)> logpdf;
  std::function<Theta(const Index& lo, const Index& hi, const Theta&)>
      project_param;
  std::function<Point(const Index& lo, const Index& hi, const Point&)>
      project_point;
  std::function<std::vector<Point>(const Index&)> enumerate_points;
  std::function<std::string(const Point&)> point_key;
  std::function<std::string(const Index&)> index_label;
};

/**
 * Exact marginalization check: summing the hi-level pmf over the preimages of
 * each lo-level point must reproduce the lo-level pmf at the projected
 * parameter. Requires an enumerable hi space.
 */
template <class Index, class Point, class Theta>
ProjectivityReport verify_marginal_projectivity_exact(
    const MarginalModelFamily<Index, Point, Theta>& models, const Index& lo,
    const Index& hi, const Theta& theta_hi, double tolerance,
    const std::string& model) {
  if (!models.enumerate_points)
    throw capability_error("exact method requires an enumerable space");
  const Theta theta_lo = models.project_param(lo, hi, theta_hi);
  std::map<std::string, double> pushed;
  for (const Point& x : models.enumerate_points(hi)) {
    const Point down = models.project_point(lo, hi, x);
    pushed[models.point_key(down)] += std::exp(models.logpdf(hi, x, theta_hi));
  }
  double max_dev = 0.0;
  for (const Point& x : models.enumerate_points(lo)) {
    const double direct = std::exp(models.logpdf(lo, x, theta_lo));
    const auto it = pushed.find(models.point_key(x));
    const double summed = it == pushed.end() ? 0.0 : it->second;
    max_dev = std::max(max_dev, std::abs(summed - direct));
  }
  return make_report(
      model, "marginal-projectivity",
      models.index_label(lo) + "<=" + models.index_label(hi),
      CheckMethod::exact_enumeration, max_dev, tolerance,
      std::to_string(pushed.size()) + " projected points");
}

/**
 * Quadrature marginalization check for densities on products of real lines.
 * The hi density is summed with trapezoid weights over the dropped
 * dimensions of an explicit rectangular grid and compared against the lo
 * density at the kept-dimension grid points.
 */
struct GridSpec {
  Eigen::VectorXd lo, hi;       // box corners, one entry per hi dimension
  std::vector<int> nodes;       // grid nodes per dimension
  std::string to_string() const;
};

ProjectivityReport verify_marginal_projectivity_quadrature(
    const std::function<double(const Eigen::VectorXd&)>& logpdf_hi,
    const std::function<double(const Eigen::VectorXd&)>& logpdf_lo,
    const std::vector<int>& kept_dims, const GridSpec& grid, double tolerance,
    const std::string& model, const std::string& pair_label);

/**
 * Commutation of a statistic family with the projections:
 * project_stat(w_hi(x)) must equal w_lo(project_point(x)) on every sample
 * point. Validates sufficient-statistic families and posterior-index
 * families alike.
 */
template <class Point, class PointLo, class Stat, class StatLo>
ProjectivityReport verify_map_projectivity(
    const std::function<Stat(const Point&)>& w_hi,
    const std::function<StatLo(const PointLo&)>& w_lo,
    const std::function<PointLo(const Point&)>& project_point,
    const std::function<StatLo(const Stat&)>& project_stat,
    const std::function<double(const StatLo&, const StatLo&)>& deviation,
    const std::vector<Point>& points, double tolerance,
    const std::string& model, const std::string& pair_label) {
  double max_dev = 0.0;
  for (const Point& x : points) {
    const StatLo through_stat = project_stat(w_hi(x));
    const StatLo through_point = w_lo(project_point(x));
    max_dev = std::max(max_dev, deviation(through_stat, through_point));
  }
  return make_report(model, "map-projectivity", pair_label,
                     CheckMethod::exact_enumeration, max_dev, tolerance,
                     std::to_string(points.size()) + " points");
}

inline double vector_deviation(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
  if (a.size() != b.size()) throw domain_error("dimension mismatch");
  return a.size() == 0 ? 0.0 : (a - b).cwiseAbs().maxCoeff();
}

}  // namespace projlim
