#ifndef PDM_SCENARIO_IO_HPP
#define PDM_SCENARIO_IO_HPP

#include <string>

#include <json.hpp>

#include "pdm/model.hpp"

namespace pdm {

/// Parses a scenario object. Keys: source_pos, sensors, av_start, a, b, grid,
/// powers | total_power, gamma, r, seed. Unknown keys and malformed values
/// throw Error(ParseError). Invariants are not checked here; see
/// validate_scenario.
Scenario scenario_from_json(const nlohmann::json& j);

Scenario load_scenario(const std::string& path);

nlohmann::json to_json(const Scenario& s);

}  // namespace pdm

#endif  // PDM_SCENARIO_IO_HPP
