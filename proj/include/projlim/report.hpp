#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace projlim {

enum class CheckMethod { exact_enumeration, quadrature, monte_carlo };

std::string to_string(CheckMethod m);
CheckMethod method_from_string(const std::string& s);

// Result of one consistency/commutation check. `pass` is never set by hand:
// make_report enforces pass == (max_deviation <= tolerance).
struct ProjectivityReport {
  std::string model;      // dirichlet | gaussian | cayley | core
  std::string check;      // check name within the suite
  std::string pair;       // readable index pair, e.g. "S4<=S5"
  CheckMethod method = CheckMethod::exact_enumeration;
  double max_deviation = 0.0;
  double tolerance = 0.0;
  std::string sample_spec;  // grid layout or draw count; empty when exhaustive
  bool pass = false;
  std::optional<std::uint64_t> seed;  // set whenever randomness entered
  std::string note;                   // free-form diagnostics, may be empty

  bool operator==(const ProjectivityReport&) const = default;
};

ProjectivityReport make_report(std::string model, std::string check,
                               std::string pair, CheckMethod method,
                               double max_deviation, double tolerance,
                               std::string sample_spec = "",
                               std::optional<std::uint64_t> seed = std::nullopt,
                               std::string note = "");

// Serialization. Field order is fixed; doubles are printed with 17 significant
// digits so a parse of the emitted text reproduces the exact bit pattern.
std::string format_double(double v);
std::string to_json_line(const ProjectivityReport& r);
ProjectivityReport report_from_json_line(const std::string& line);
std::string csv_header();
std::string to_csv_line(const ProjectivityReport& r);

// Verdict of a pullback-existence / concentration question. `verdict` is
// empty when the input does not determine an answer (finite prefix with no
// declared tail); callers that require a verdict must treat that case
// explicitly instead of guessing.
struct ConcentrationReport {
  std::string model;
  std::optional<bool> verdict;
  std::string reason;
  // (index, running value) checkpoints: partial traces or partial sums.
  std::vector<std::pair<int, double>> series;
};

}  // namespace projlim
