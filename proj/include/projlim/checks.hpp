#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "projlim/report.hpp"

namespace projlim {

// Reference seed for default runs; any seed is valid, but Monte Carlo checks
// at 3 standard errors are only guaranteed green on the reference seed.
inline constexpr std::uint64_t kDefaultSeed = 1u;

struct ExperimentConfig {
  std::string model;  // dirichlet | gaussian | cayley
  std::string check;  // projectivity | commute | sufficiency | composition |
                      // concentration | sampler-vs-oracle
  int n = 0;          // size override; 0 keeps the per-check default
  std::uint64_t seed = kDefaultSeed;
  std::optional<double> tol_override;
};

// Throws config_error for unknown tags or sizes beyond the hard capability
// limits (group enumeration n <= 8, matrix dim <= 64, atoms <= 64, partition
// enumeration on <= 8 atoms).
void validate_config(const ExperimentConfig& config);

struct CheckSuiteResult {
  std::string label;
  std::vector<ProjectivityReport> reports;
  bool pass = true;
  double seconds = 0.0;  // not serialized; reporting it is the caller's call

  void add(ProjectivityReport report);
};

CheckSuiteResult run_check(const ExperimentConfig& config);

// One acceptance criterion: a named bundle of reports with a wall-clock
// budget. pass covers the reports and the budget.
struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  double seconds = 0.0;
  double limit_seconds = 0.0;  // 0 = no budget
  std::vector<ProjectivityReport> reports;
};

int criterion_count();
CriterionResult run_criterion(int id, std::uint64_t seed);
std::vector<CriterionResult> run_all_criteria(std::uint64_t seed);

// Every criterion at default sizes, flattened; pass iff everything passes.
CheckSuiteResult run_full_suite(std::uint64_t seed = kDefaultSeed);

enum class ExportFormat { json_lines, csv };

// Stable field order, 17 significant digits, one record per line. An empty
// report list yields an empty file (json-lines) or just the header (csv).
void export_reports(const std::vector<ProjectivityReport>& reports,
                    const std::string& path, ExportFormat format);

}  // namespace projlim
