#pragma once

#include <functional>
#include <vector>

namespace projlim {

// Adaptive Gauss-Kronrod integral of f over [a, b]. Throws numeric_error if
// the error estimate exceeds rel_tol times the integral magnitude.
double integrate_1d(const std::function<double(double)>& f, double a, double b,
                    double rel_tol = 1e-13);

// Evenly spaced grid with `nodes` points, endpoints included. nodes >= 2.
std::vector<double> make_grid(double lo, double hi, int nodes);

// Trapezoid weight of node i on an n-node even grid with spacing h.
inline double trapezoid_weight(int i, int nodes, double h) {
  return (i == 0 || i == nodes - 1) ? h / 2 : h;
}

// Tabulated inverse CDF of an unnormalized density on [lo, hi]. The CDF is
// accumulated by trapezoid over an even grid and inverted piecewise linearly,
// so draws are deterministic functions of u with O(h^2) placement error.
class InverseCdfTable {
 public:
  InverseCdfTable(const std::function<double(double)>& log_density, double lo,
                  double hi, int nodes);
  double draw(double u) const;  // u in [0, 1)
  double total_mass() const { return mass_; }

 private:
  std::vector<double> x_, cdf_;
  double mass_;
};

}  // namespace projlim
