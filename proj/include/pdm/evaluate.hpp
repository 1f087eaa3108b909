#ifndef PDM_EVALUATE_HPP
#define PDM_EVALUATE_HPP

#include <variant>

#include "pdm/metrics.hpp"
#include "pdm/power_alloc.hpp"

namespace pdm {

/// Weighted sum-power budget P_T for optimized-power metrics.
struct PowerBudget {
  double total;
};

using PowerInput = std::variant<PowerAllocation, PowerBudget>;

/// Dispatches to the bound named by `spec`. Fixed-power specs take a
/// PowerAllocation, optimized-power specs a PowerBudget.
inline BoundValue evaluate(const MetricSpec& spec, const NetworkParams& net, const PowerInput& power) {
  if (spec.power == PowerMode::Optimized) {
    const auto* budget = std::get_if<PowerBudget>(&power);
    if (!budget) throw Error(ErrorCode::InvalidInput, spec.name() + " needs a power budget");
    const OptResult opt = optimize(spec, net, budget->total);
    return {opt.value, std::nullopt, opt.valid};
  }
  const auto* alloc = std::get_if<PowerAllocation>(&power);
  if (!alloc) throw Error(ErrorCode::InvalidInput, spec.name() + " needs a per-sensor power vector");
  if (spec.objective == Objective::SR)
    return spec.bound == Bound::Upper ? sr_upper(net, alloc->p) : sr_lower(net, alloc->p);
  return spec.bound == Bound::Upper ? fr_upper(net, alloc->p) : fr_lower(net, alloc->p, spec.lower_mode());
}

/// The eight metrics with FR lower in its default (exact) mode.
inline std::vector<MetricSpec> all_metric_specs() {
  std::vector<MetricSpec> out;
  for (auto o : {Objective::SR, Objective::FR})
    for (auto b : {Bound::Upper, Bound::Lower})
      for (auto p : {PowerMode::Fixed, PowerMode::Optimized}) out.push_back(MetricSpec::make(o, b, p));
  return out;
}

}  // namespace pdm

#endif  // PDM_EVALUATE_HPP
