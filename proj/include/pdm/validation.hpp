#ifndef PDM_VALIDATION_HPP
#define PDM_VALIDATION_HPP

// Acceptance checks shared by the test suite and `pdm_cli validate`.
// Every check draws its instances from a fixed seed, so a report is
// reproducible bit for bit.

#include <cstdint>
#include <string>
#include <vector>

namespace pdm {

enum class ValidationLevel { Quick, Full };

struct ValidationOptions {
  ValidationLevel level = ValidationLevel::Full;
  std::uint64_t seed = 1;
  std::string scenario_dir;  // bundled scenarios; empty uses the compiled-in default
  /// Mutation hook: closed-form values are multiplied by (1 + fault) before
  /// they are compared with their oracles. Zero for real runs.
  double fault = 0.0;
};

struct CheckResult {
  int criterion = 0;
  std::string name;
  bool pass = false;
  std::size_t cases = 0;
  double measured = 0.0;   // worst deviation, or number of violations
  double tolerance = 0.0;
  double seconds = 0.0;
  double time_limit = 0.0;
  std::string detail;
};

struct ValidationReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
};

std::string default_scenario_dir();

CheckResult check_bound_ordering(const ValidationOptions& opt);
CheckResult check_exactness_identities(const ValidationOptions& opt);
CheckResult check_monte_carlo(const ValidationOptions& opt);
CheckResult check_optimization_oracle(const ValidationOptions& opt);
CheckResult check_root_residuals(const ValidationOptions& opt);
CheckResult check_rate_distortion(const ValidationOptions& opt);
CheckResult check_gap_experiment(const ValidationOptions& opt);
CheckResult check_path_reproduction(const ValidationOptions& opt);
CheckResult check_path_invariants(const ValidationOptions& opt);

/// Runs checks 1 to 9 in order.
ValidationReport run_validation(const ValidationOptions& opt);

}  // namespace pdm

#endif  // PDM_VALIDATION_HPP
