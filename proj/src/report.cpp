#include "projlim/report.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "projlim/errors.hpp"

namespace projlim {

std::string to_string(CheckMethod m) {
  switch (m) {
    case CheckMethod::exact_enumeration:
      return "exact-enumeration";
    case CheckMethod::quadrature:
      return "quadrature";
    case CheckMethod::monte_carlo:
      return "monte-carlo";
  }
  throw domain_error("unknown check method");
}

CheckMethod method_from_string(const std::string& s) {
  if (s == "exact-enumeration") return CheckMethod::exact_enumeration;
  if (s == "quadrature") return CheckMethod::quadrature;
  if (s == "monte-carlo") return CheckMethod::monte_carlo;
  throw domain_error("unknown check method: " + s);
}

ProjectivityReport make_report(std::string model, std::string check,
                               std::string pair, CheckMethod method,
                               double max_deviation, double tolerance,
                               std::string sample_spec,
                               std::optional<std::uint64_t> seed,
                               std::string note) {
  ProjectivityReport r;
  r.model = std::move(model);
  r.check = std::move(check);
  r.pair = std::move(pair);
  r.method = method;
  r.max_deviation = max_deviation;
  r.tolerance = tolerance;
  r.sample_spec = std::move(sample_spec);
  r.seed = seed;
  r.note = std::move(note);
  r.pass = max_deviation <= tolerance;
  return r;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string json_escape(const std::string& s) {
  return nlohmann::json(s).dump();
}

}  // namespace

std::string to_json_line(const ProjectivityReport& r) {
  std::ostringstream out;
  out << "{\"model\":" << json_escape(r.model)
      << ",\"check\":" << json_escape(r.check)
      << ",\"pair\":" << json_escape(r.pair)
      << ",\"method\":" << json_escape(to_string(r.method))
      << ",\"max_deviation\":" << format_double(r.max_deviation)
      << ",\"tolerance\":" << format_double(r.tolerance)
      << ",\"sample_spec\":" << json_escape(r.sample_spec)
      << ",\"pass\":" << (r.pass ? "true" : "false") << ",\"seed\":";
  if (r.seed) {
    out << *r.seed;
  } else {
    out << "null";
  }
  out << ",\"note\":" << json_escape(r.note) << "}";
  return out.str();
}

ProjectivityReport report_from_json_line(const std::string& line) {
  nlohmann::json j = nlohmann::json::parse(line);
  ProjectivityReport r;
  r.model = j.at("model").get<std::string>();
  r.check = j.at("check").get<std::string>();
  r.pair = j.at("pair").get<std::string>();
  r.method = method_from_string(j.at("method").get<std::string>());
  r.max_deviation = j.at("max_deviation").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  r.sample_spec = j.at("sample_spec").get<std::string>();
  r.pass = j.at("pass").get<bool>();
  if (!j.at("seed").is_null()) r.seed = j.at("seed").get<std::uint64_t>();
  r.note = j.at("note").get<std::string>();
  return r;
}

std::string csv_header() {
  return "model,check,pair,method,max_deviation,tolerance,sample_spec,pass,"
         "seed,note";
}

namespace {

std::string csv_escape(const std::string& s) {
  bool needs_quotes = s.find_first_of(",\"\n") != std::string::npos;
  if (!needs_quotes) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string to_csv_line(const ProjectivityReport& r) {
  std::ostringstream out;
  out << csv_escape(r.model) << ',' << csv_escape(r.check) << ','
      << csv_escape(r.pair) << ',' << to_string(r.method) << ','
      << format_double(r.max_deviation) << ',' << format_double(r.tolerance)
      << ',' << csv_escape(r.sample_spec) << ','
      << (r.pass ? "true" : "false") << ',';
  if (r.seed) out << *r.seed;
  out << ',' << csv_escape(r.note);
  return out.str();
}

}  // namespace projlim
