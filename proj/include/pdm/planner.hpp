#ifndef PDM_PLANNER_HPP
#define PDM_PLANNER_HPP

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pdm/model.hpp"
#include "pdm/types.hpp"

namespace pdm {

/// Candidate moves in tie-breaking order: the first minimum wins.
enum class Move { Stay, PlusX, MinusX, PlusY, MinusY };

const char* to_string(Move move);

struct Candidate {
  Move move;
  Point2 position;
  double cost;
};

/// Cost of standing at a position. Defaults to the metric distortion.
using CostFn = std::function<double(const Scenario&, const MetricSpec&, const Point2&)>;

/// Distortion of `spec` with the collector at `pos`. Fixed-power specs use
/// the scenario's per-sensor powers, optimized specs its weighted budget.
double metric_cost(const Scenario& scenario, const MetricSpec& spec, const Point2& pos);

/// Candidates within this relative distance of the minimum count as tied.
inline constexpr double kTieTolerance = 1e-12;

/// Costs at {stay, +x, -x, +y, -y}; moves leaving the grid are dropped.
std::vector<Candidate> candidate_costs(const Scenario& scenario, const MetricSpec& spec, const Point2& pos,
                                       const CostFn& cost = metric_cost);

struct PathResult {
  std::vector<Point2> positions;  // steps + 1 entries, starting at av_start
  std::vector<double> costs;
  std::vector<Move> moves;        // moves[k] led to positions[k + 1]
  std::vector<std::size_t> ties;  // steps whose minimum was shared by several candidates
  std::optional<std::size_t> stall_at;  // first step at which the collector stayed put
  MetricSpec spec;
  std::string scenario_id;
};

/// Greedy descent on the metric from av_start. Once the collector stays, the
/// cost landscape is unchanged and the remaining steps repeat the stay.
PathResult greedy_plan(const Scenario& scenario, const MetricSpec& spec, std::size_t steps,
                       const std::string& scenario_id = "", const CostFn& cost = metric_cost);

struct PathComparison {
  std::vector<PathResult> paths;
  std::vector<std::string> errors;  // per spec; empty when the plan succeeded
  /// Earliest step at which any two successful paths occupy different positions.
  std::optional<std::size_t> first_divergence;
  /// final_distances[i][m]: distance from path i's end to sensor m.
  std::vector<Eigen::VectorXd> final_distances;
};

/// Plans every spec; a spec whose metric cannot be evaluated is reported in
/// `errors` with an empty path instead of aborting the comparison.
PathComparison compare_paths(const Scenario& scenario, const std::vector<MetricSpec>& specs, std::size_t steps,
                             const std::string& scenario_id = "");

/// Index of the sensor closest to `pos`.
std::size_t nearest_sensor(const Scenario& scenario, const Point2& pos);

}  // namespace pdm

#endif  // PDM_PLANNER_HPP
