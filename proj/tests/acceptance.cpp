// Runs the nine acceptance criteria and prints one line per criterion.

#include <cstdio>

#include "pdm/validation.hpp"

int main() {
  pdm::ValidationOptions opt;
  opt.level = pdm::ValidationLevel::Full;
  const pdm::ValidationReport report = pdm::run_validation(opt);
  for (const auto& c : report.checks) {
    std::printf("%s criterion %d %s: cases=%zu measured=%.3g tolerance=%.3g time=%.2fs/%.0fs %s\n",
                c.pass ? "PASS" : "FAIL", c.criterion, c.name.c_str(), c.cases, c.measured, c.tolerance,
                c.seconds, c.time_limit, c.detail.c_str());
  }
  return report.all_pass() ? 0 : 1;
}
