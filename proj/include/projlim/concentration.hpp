#pragma once

#include <Eigen/Dense>
#include <variant>

#include "projlim/cayley.hpp"
#include "projlim/dirichlet.hpp"
#include "projlim/gaussian.hpp"
#include "projlim/report.hpp"

namespace projlim {

// Does the infinite-level model concentrate on the intended sequence space?
// Each query form carries exactly the information that makes the question
// decidable; a finite theta prefix does not, and gets no verdict.

struct GpTraceQuery {
  CovarianceSpec cov;
  int truncation;
};

struct CayleyTailQuery {
  TailFamily family;
  int limit;  // partial sums of q_j are reported up to this index
};

struct CayleyPrefixQuery {
  Eigen::VectorXd theta_prefix;  // coordinates j = 2..n
};

struct DpFiniteQuery {
  AtomBase base;
};

using ConcentrationQuery =
    std::variant<GpTraceQuery, CayleyTailQuery, CayleyPrefixQuery, DpFiniteQuery>;

ConcentrationReport concentration_predicate(const ConcentrationQuery& query);

}  // namespace projlim
