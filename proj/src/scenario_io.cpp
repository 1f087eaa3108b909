#include "pdm/scenario_io.hpp"

#include <fstream>
#include <set>

namespace pdm {

namespace {

using nlohmann::json;

Error parse_error(const std::string& what) { return Error(ErrorCode::ParseError, what); }

double number(const json& j, const std::string& key) {
  if (!j.is_number()) throw parse_error("'" + key + "' must be a number");
  return j.get<double>();
}

Point2 point(const json& j, const std::string& key) {
  if (!j.is_array() || j.size() != 2) throw parse_error("'" + key + "' must be [x, y]");
  return {number(j[0], key), number(j[1], key)};
}

Eigen::VectorXd vector(const json& j, const std::string& key) {
  if (!j.is_array()) throw parse_error("'" + key + "' must be an array of numbers");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], key);
  return v;
}

json to_array(const Eigen::VectorXd& v) { return json(std::vector<double>(v.data(), v.data() + v.size())); }

}  // namespace

Scenario scenario_from_json(const json& j) {
  static const std::set<std::string> known = {"source_pos", "sensors", "av_start", "a", "b", "grid",
                                              "powers", "total_power", "gamma", "r", "seed"};
  if (!j.is_object()) throw parse_error("scenario must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw parse_error("unknown key '" + key + "'");

  Scenario s;
  if (!j.contains("sensors")) throw parse_error("missing 'sensors'");
  const auto& sensors = j.at("sensors");
  if (!sensors.is_array()) throw parse_error("'sensors' must be an array of [x, y]");
  for (const auto& p : sensors) s.sensor_pos.push_back(point(p, "sensors"));

  if (!j.contains("a") || !j.contains("b")) throw parse_error("missing propagation constant 'a' or 'b'");
  s.a = number(j.at("a"), "a");
  s.b = number(j.at("b"), "b");
  if (j.contains("source_pos")) s.source_pos = point(j.at("source_pos"), "source_pos");
  if (j.contains("av_start")) s.av_start = point(j.at("av_start"), "av_start");

  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    if (!g.is_object()) throw parse_error("'grid' must be an object");
    static const std::set<std::string> grid_keys = {"x_min", "x_max", "y_min", "y_max", "step"};
    for (const auto& [key, _] : g.items())
      if (!grid_keys.count(key)) throw parse_error("unknown grid key '" + key + "'");
    if (g.contains("x_min")) s.grid.x_min = number(g.at("x_min"), "grid.x_min");
    if (g.contains("x_max")) s.grid.x_max = number(g.at("x_max"), "grid.x_max");
    if (g.contains("y_min")) s.grid.y_min = number(g.at("y_min"), "grid.y_min");
    if (g.contains("y_max")) s.grid.y_max = number(g.at("y_max"), "grid.y_max");
    if (g.contains("step")) s.grid.step = number(g.at("step"), "grid.step");
  }

  if (j.contains("powers")) s.per_sensor_power = vector(j.at("powers"), "powers");
  if (j.contains("total_power")) s.total_power = number(j.at("total_power"), "total_power");
  if (j.contains("gamma")) s.gamma = vector(j.at("gamma"), "gamma");
  if (j.contains("r")) s.r = vector(j.at("r"), "r");
  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) throw parse_error("'seed' must be a non-negative integer");
    s.seed = j.at("seed").get<std::uint64_t>();
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open scenario file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw parse_error("malformed JSON in '" + path + "': " + e.what());
  }
  return scenario_from_json(j);
}

json to_json(const Scenario& s) {
  json j;
  j["source_pos"] = {s.source_pos.x(), s.source_pos.y()};
  j["sensors"] = json::array();
  for (const auto& p : s.sensor_pos) j["sensors"].push_back({p.x(), p.y()});
  j["av_start"] = {s.av_start.x(), s.av_start.y()};
  j["a"] = s.a;
  j["b"] = s.b;
  j["grid"] = {{"x_min", s.grid.x_min}, {"x_max", s.grid.x_max}, {"y_min", s.grid.y_min},
               {"y_max", s.grid.y_max}, {"step", s.grid.step}};
  if (s.per_sensor_power) j["powers"] = to_array(*s.per_sensor_power);
  if (s.total_power) j["total_power"] = *s.total_power;
  j["gamma"] = to_array(s.gamma_or_ones());
  j["r"] = to_array(s.r_or_ones());
  j["seed"] = s.seed;
  return j;
}

}  // namespace pdm
