// Acceptance gate: runs every criterion at the reference seed and prints one
// verdict line per criterion. Exit status 0 only when all of them pass.

#include <cstdio>
#include <iostream>

#include "projlim/checks.hpp"
#include "projlim/report.hpp"

int main() {
  const auto results = projlim::run_all_criteria(projlim::kDefaultSeed);
  int passed = 0;
  for (const auto& c : results) {
    char timing[64];
    if (c.limit_seconds > 0.0)
      std::snprintf(timing, sizeof timing, "%7.2f s (limit %.0f s)", c.seconds,
                    c.limit_seconds);
    else
      std::snprintf(timing, sizeof timing, "%7.2f s", c.seconds);
    std::printf("%s %2d %-34s %s\n", c.pass ? "PASS" : "FAIL", c.id,
                c.name.c_str(), timing);
    passed += c.pass;
    if (!c.pass)
      for (const auto& r : c.reports)
        if (!r.pass) std::cerr << "  " << projlim::to_json_line(r) << "\n";
  }
  std::printf("%d/%d criteria passed\n", passed,
              static_cast<int>(results.size()));
  return passed == static_cast<int>(results.size()) ? 0 : 1;
}
