#include "projlim/projective.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "projlim/errors.hpp"

namespace projlim {

std::string GridSpec::to_string() const {
  std::ostringstream out;
  for (Eigen::Index d = 0; d < lo.size(); ++d) {
    if (d) out << " x ";
    out << "[" << this->lo(d) << "," << hi(d) << "]/" << nodes[d];
  }
  return out.str();
}

namespace {

bool advance(std::vector<int>& idx, const std::vector<int>& limits) {
  for (std::size_t d = 0; d < idx.size(); ++d) {
    if (++idx[d] < limits[d]) return true;
    idx[d] = 0;
  }
  return false;
}

}  // namespace

ProjectivityReport verify_marginal_projectivity_quadrature(
    const std::function<double(const Eigen::VectorXd&)>& logpdf_hi,
    const std::function<double(const Eigen::VectorXd&)>& logpdf_lo,
    const std::vector<int>& kept_dims, const GridSpec& grid, double tolerance,
    const std::string& model, const std::string& pair_label) {
  const int dims = static_cast<int>(grid.lo.size());
  if (grid.hi.size() != dims || static_cast<int>(grid.nodes.size()) != dims)
    throw domain_error("grid spec sizes disagree");
  std::vector<char> kept(dims, 0);
  for (int d : kept_dims) {
    if (d < 0 || d >= dims) throw domain_error("kept dimension out of range");
    kept[d] = 1;
  }
  std::vector<int> dropped;
  for (int d = 0; d < dims; ++d)
    if (!kept[d]) dropped.push_back(d);
  if (dropped.empty() || kept_dims.empty())
    throw domain_error("need at least one kept and one dropped dimension");

  std::vector<std::vector<double>> axes(dims);
  std::vector<double> spacing(dims);
  for (int d = 0; d < dims; ++d) {
    axes[d] = make_grid(grid.lo(d), grid.hi(d), grid.nodes[d]);
    spacing[d] = (grid.hi(d) - grid.lo(d)) / (grid.nodes[d] - 1);
  }

  std::vector<int> kept_limits, dropped_limits;
  for (int d : kept_dims) kept_limits.push_back(grid.nodes[d]);
  for (int d : dropped) dropped_limits.push_back(grid.nodes[d]);

  double max_dev = 0.0;
  Eigen::VectorXd point(dims);
  Eigen::VectorXd kept_point(kept_dims.size());
  std::vector<int> ki(kept_dims.size(), 0);
  do {
    for (std::size_t a = 0; a < kept_dims.size(); ++a) {
      point(kept_dims[a]) = axes[kept_dims[a]][ki[a]];
      kept_point(a) = axes[kept_dims[a]][ki[a]];
    }
    double marginal = 0.0;
    std::vector<int> di(dropped.size(), 0);
    do {
      double weight = 1.0;
      for (std::size_t a = 0; a < dropped.size(); ++a) {
        const int d = dropped[a];
        point(d) = axes[d][di[a]];
        weight *= trapezoid_weight(di[a], grid.nodes[d], spacing[d]);
      }
      marginal += weight * std::exp(logpdf_hi(point));
    } while (advance(di, dropped_limits));
    const double direct = std::exp(logpdf_lo(kept_point));
    max_dev = std::max(max_dev, std::abs(marginal - direct));
  } while (advance(ki, kept_limits));

  return make_report(model, "marginal-projectivity", pair_label,
                     CheckMethod::quadrature, max_dev, tolerance,
                     grid.to_string());
}

}  // namespace projlim
