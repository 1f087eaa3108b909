#ifndef PDM_POWER_ALLOC_HPP
#define PDM_POWER_ALLOC_HPP

// Optimal sensor power allocation under sum_m r_m P_m <= P_T.
//
// Every optimal allocation has the form
//   P_m = K^2 alpha_m^2 beta_m^2 (1 + beta_m^2) / (r_m (1 + beta_m^2) + s alpha_m^2)^2
// for a family-specific shift s and a scale K^2 that exhausts the budget:
//   SR lower / FR lower : s = -lambda, lambda the root of
//                         sum_m alpha^2 beta^2 / (r (1 + beta^2) - lambda alpha^2) = 1 / lambda
//   FR upper            : s = lambda1, the fixed point of the FR upper KKT system
//   SR upper            : s = P_T

#include <string>
#include <utility>
#include <vector>

#include "pdm/metrics.hpp"
#include "pdm/types.hpp"

namespace pdm {

/// Multipliers are carried in extended precision: near the pole
/// min_m r_m (1 + beta_m^2) / alpha_m^2 the multiplier equations amplify
/// the rounding of lambda by roughly 1 / min_m beta_m^2.
using Multiplier = long double;

/// Per-sensor power rule broadcast by the collector; each sensor recovers its
/// own P_m from (alpha_m, beta_m, r_m) and these two numbers.
struct BroadcastRecipe {
  Multiplier shift = 0.0;
  double scale_sq = 0.0;
  double floor = 1e-15;  // powers below this are switched off

  double shape(double alpha, double beta, double r) const;
  double power(double alpha, double beta, double r) const;
  Eigen::VectorXd powers(const NetworkParams& net) const;
};

struct OptResult {
  double value = 0.0;
  PowerAllocation allocation;
  Multiplier lambda = 0.0;  // root of the family's multiplier equation (NaN for SR upper)
  double lambda2 = 0.0;  // allocation normalization, lambda2^2 / 4 = K^2
  double residual = 0.0; // |root equation residual| at lambda, multiplied through
  bool valid = true;
  BroadcastRecipe recipe;
  std::vector<std::string> notes;
  /// FR lower only: the high-power asymptote M ((1 + |beta|^2) prod gamma' lambda / P_T)^{1/M}
  /// and whether it stays below the prior sum Lambda gamma'.
  std::optional<double> asymptote;
  bool asymptote_valid = false;
};

/// lambda in (0, min_m r_m (1 + beta_m^2) / alpha_m^2) solving the SR-lower
/// multiplier equation. Independent of the budget.
Multiplier solve_lambda_sr(const NetworkParams& net);

/// |lambda sum_m alpha^2 beta^2 / (r (1 + beta^2) - lambda alpha^2) - 1|
double lambda_sr_residual(const NetworkParams& net, Multiplier lambda);

struct FrMultipliers {
  Multiplier lambda1 = 0.0;
  Multiplier lambda2 = 0.0;
  double residual1 = 0.0;
  double residual2 = 0.0;
  bool lambda1_in_bracket = true;  // false when the (0, P_T) bracket held no root
};

/// lambda1 solves delta(lambda1) S(lambda1) = 1 / lambda1 with
/// delta = -1 - (1 - P_T / lambda1)(1 + |beta|^2) and
/// S = sum_m alpha^2 beta^2 / (r (1 + beta^2) + lambda1 alpha^2);
/// lambda2 solves the SR-lower multiplier equation.
FrMultipliers solve_lambda_fr(const NetworkParams& net, double total_power);

/// |lambda1 delta(lambda1) S(lambda1) - 1|
double lambda_fr_residual(const NetworkParams& net, double total_power, Multiplier lambda1);

OptResult sr_lower_opt(const NetworkParams& net, double total_power);
OptResult sr_upper_opt(const NetworkParams& net, double total_power);
/// Requires gamma == 1; throws Error(NonUnitGamma) otherwise.
OptResult fr_upper_opt(const NetworkParams& net, double total_power);
OptResult fr_lower_opt(const NetworkParams& net, double total_power,
                       FrLowerMode mode = FrLowerMode::Exact);

struct FrBounds {
  OptResult upper;
  OptResult lower;
};

FrBounds fr_bounds_opt(const NetworkParams& net, double total_power,
                       FrLowerMode mode = FrLowerMode::Exact);

/// Optimized bound for any metric spec (spec.power is ignored).
OptResult optimize(const MetricSpec& spec, const NetworkParams& net, double total_power);

inline const BroadcastRecipe& allocation_broadcast_view(const OptResult& result) {
  return result.recipe;
}

}  // namespace pdm

#endif  // PDM_POWER_ALLOC_HPP
