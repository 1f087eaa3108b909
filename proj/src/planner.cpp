#include "pdm/planner.hpp"

#include <algorithm>
#include <cmath>

#include "pdm/evaluate.hpp"

namespace pdm {

const char* to_string(Move move) {
  switch (move) {
    case Move::Stay: return "stay";
    case Move::PlusX: return "+x";
    case Move::MinusX: return "-x";
    case Move::PlusY: return "+y";
    case Move::MinusY: return "-y";
  }
  return "?";
}

double metric_cost(const Scenario& scenario, const MetricSpec& spec, const Point2& pos) {
  const NetworkParams net = build_network_params(scenario, pos);
  if (spec.power == PowerMode::Optimized) return evaluate(spec, net, PowerBudget{scenario.power_budget()}).distortion;
  return evaluate(spec, net, PowerAllocation(scenario.fixed_powers(), net.r)).distortion;
}

std::vector<Candidate> candidate_costs(const Scenario& scenario, const MetricSpec& spec, const Point2& pos,
                                       const CostFn& cost) {
  const double h = scenario.grid.step;
  const std::array<std::pair<Move, Point2>, 5> offsets = {{
      {Move::Stay, {0.0, 0.0}},
      {Move::PlusX, {h, 0.0}},
      {Move::MinusX, {-h, 0.0}},
      {Move::PlusY, {0.0, h}},
      {Move::MinusY, {0.0, -h}},
  }};
  std::vector<Candidate> out;
  for (const auto& [move, delta] : offsets) {
    const Point2 next = pos + delta;
    if (move != Move::Stay && !scenario.grid.contains(next)) continue;
    out.push_back({move, next, cost(scenario, spec, next)});
  }
  return out;
}

PathResult greedy_plan(const Scenario& scenario, const MetricSpec& spec, std::size_t steps,
                       const std::string& scenario_id, const CostFn& cost) {
  PathResult path;
  path.spec = spec;
  path.scenario_id = scenario_id;

  // Positions are kept as integer grid offsets from the start so that
  // mirrored scenarios produce exactly mirrored coordinates.
  long ix = 0, iy = 0;
  const double h = scenario.grid.step;
  auto at = [&](long i, long j) {
    return Point2(scenario.av_start.x() + static_cast<double>(i) * h,
                  scenario.av_start.y() + static_cast<double>(j) * h);
  };

  path.positions.push_back(scenario.av_start);
  path.costs.push_back(cost(scenario, spec, scenario.av_start));

  for (std::size_t step = 0; step < steps; ++step) {
    if (path.stall_at) {
      path.positions.push_back(path.positions.back());
      path.costs.push_back(path.costs.back());
      path.moves.push_back(Move::Stay);
      continue;
    }
    const auto candidates = candidate_costs(scenario, spec, at(ix, iy), cost);
    double best = candidates.front().cost;
    for (const auto& c : candidates) best = std::min(best, c.cost);
    const double tol = kTieTolerance * std::max(1.0, std::fabs(best));

    const Candidate* chosen = nullptr;
    std::size_t tied = 0;
    for (const auto& c : candidates) {
      if (c.cost <= best + tol) {
        ++tied;
        if (!chosen) chosen = &c;
      }
    }
    if (tied > 1) path.ties.push_back(step);

    switch (chosen->move) {
      case Move::Stay: break;
      case Move::PlusX: ++ix; break;
      case Move::MinusX: --ix; break;
      case Move::PlusY: ++iy; break;
      case Move::MinusY: --iy; break;
    }
    if (chosen->move == Move::Stay) path.stall_at = step;
    path.positions.push_back(at(ix, iy));
    path.costs.push_back(chosen->move == Move::Stay ? path.costs.back() : chosen->cost);
    path.moves.push_back(chosen->move);
  }
  return path;
}

std::size_t nearest_sensor(const Scenario& scenario, const Point2& pos) {
  std::size_t best = 0;
  for (std::size_t m = 1; m < scenario.sensor_pos.size(); ++m)
    if ((scenario.sensor_pos[m] - pos).norm() < (scenario.sensor_pos[best] - pos).norm()) best = m;
  return best;
}

PathComparison compare_paths(const Scenario& scenario, const std::vector<MetricSpec>& specs, std::size_t steps,
                             const std::string& scenario_id) {
  PathComparison out;
  for (const auto& spec : specs) {
    try {
      out.paths.push_back(greedy_plan(scenario, spec, steps, scenario_id));
      out.errors.emplace_back();
    } catch (const Error& e) {
      PathResult empty;
      empty.spec = spec;
      empty.scenario_id = scenario_id;
      out.paths.push_back(std::move(empty));
      out.errors.emplace_back(e.what());
    }
  }

  for (const auto& path : out.paths) {
    Eigen::VectorXd d(scenario.sensor_count());
    if (!path.positions.empty())
      for (Eigen::Index m = 0; m < d.size(); ++m)
        d(m) = (scenario.sensor_pos[static_cast<std::size_t>(m)] - path.positions.back()).norm();
    else
      d.setConstant(std::nan(""));
    out.final_distances.push_back(d);
  }

  for (std::size_t i = 0; i < out.paths.size(); ++i)
    for (std::size_t j = i + 1; j < out.paths.size(); ++j) {
      const auto& a = out.paths[i].positions;
      const auto& b = out.paths[j].positions;
      if (a.empty() || b.empty()) continue;
      const std::size_t n = std::min(a.size(), b.size());
      for (std::size_t k = 0; k < n; ++k)
        if (a[k] != b[k]) {
          if (!out.first_divergence || k < *out.first_divergence) out.first_divergence = k;
          break;
        }
    }
  return out;
}

}  // namespace pdm
