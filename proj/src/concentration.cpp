#include "projlim/concentration.hpp"

#include <cmath>
#include <string>

namespace projlim {

namespace {

// Checkpoints thin the reported series to a readable size while keeping the
// exact partial sums at powers of 10.
bool is_checkpoint(int j, int limit) {
  if (j == limit) return true;
  for (int p = 10; p <= limit; p *= 10)
    if (j == p) return true;
  return false;
}

ConcentrationReport gp_trace(const GpTraceQuery& q) {
  ConcentrationReport report;
  report.model = "gaussian";
  double partial = 0.0;
  for (int j = 1; j <= q.truncation; ++j) {
    partial += q.cov.entry(j, j);
    if (is_checkpoint(j, q.truncation)) report.series.emplace_back(j, partial);
  }
  if (!q.cov.trace_bound.has_value()) {
    report.verdict = false;
    report.reason = "declared trace unbounded; the limit object spreads out "
                    "of the summable sequence space";
  } else if (partial <= *q.cov.trace_bound) {
    report.verdict = true;
    report.reason = "partial trace " + std::to_string(partial) +
                    " within declared bound " +
                    std::to_string(*q.cov.trace_bound);
  } else {
    report.verdict = false;
    report.reason = "partial trace already exceeds the declared bound";
  }
  return report;
}

ConcentrationReport cayley_tail(const CayleyTailQuery& q) {
  ConcentrationReport report;
  report.model = "cayley";
  double partial = 0.0;
  for (int j = 2; j <= q.limit; ++j) {
    partial += q.family.q_at(j);
    if (is_checkpoint(j, q.limit)) report.series.emplace_back(j, partial);
  }
  // q_j behaves like e^-b j^(1-c); the sum is finite exactly when c > 2.
  report.verdict = q.family.c > 2.0;
  report.reason = *report.verdict
                      ? "q_j decays like j^(1-c) with c > 2; summable, so "
                        "only finitely many long-range moves occur"
                      : "q_j decays no faster than 1/j; the expected number "
                        "of long-range moves diverges";
  return report;
}

ConcentrationReport cayley_prefix(const CayleyPrefixQuery& q) {
  ConcentrationReport report;
  report.model = "cayley";
  double partial = 0.0;
  const int n = static_cast<int>(q.theta_prefix.size()) + 1;
  for (int j = 2; j <= n; ++j) {
    partial += bernoulli_q(j, q.theta_prefix(j - 2));
    if (is_checkpoint(j, n) || j == n) report.series.emplace_back(j, partial);
  }
  report.verdict.reset();
  report.reason = "finite prefix only: summability of q_j is undecidable "
                  "without a declared tail family";
  return report;
}

ConcentrationReport dp_finite(const DpFiniteQuery& q) {
  ConcentrationReport report;
  report.model = "dirichlet";
  report.verdict = true;
  report.reason = "finite atom measure with total mass 1 is countably "
                  "additive by construction";
  report.series.emplace_back(q.base.atom_count(), q.base.g0.sum());
  return report;
}

}  // namespace

ConcentrationReport concentration_predicate(const ConcentrationQuery& query) {
  return std::visit(
      [](const auto& q) -> ConcentrationReport {
        using T = std::decay_t<decltype(q)>;
        if constexpr (std::is_same_v<T, GpTraceQuery>) return gp_trace(q);
        else if constexpr (std::is_same_v<T, CayleyTailQuery>)
          return cayley_tail(q);
        else if constexpr (std::is_same_v<T, CayleyPrefixQuery>)
          return cayley_prefix(q);
        else
          return dp_finite(q);
      },
      query);
}

}  // namespace projlim
