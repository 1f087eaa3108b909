#include <gtest/gtest.h>

#include <cmath>

#include "pdm/model.hpp"
#include "pdm/scenario_io.hpp"

using namespace pdm;

namespace {

Scenario three_sensors() {
  Scenario s;
  s.sensor_pos = {{0.5, 1.0}, {0.0, 0.0}, {0.5, -1.0}};
  s.a = 1.0;
  s.b = 10.0;
  s.per_sensor_power = Eigen::VectorXd::Constant(3, 10.0);
  return s;
}

bool has(const std::vector<Diagnostic>& diags, DiagnosticKind kind) {
  for (const auto& d : diags)
    if (d.kind == kind) return true;
  return false;
}

}  // namespace

TEST(Gains, InverseSquare) {
  Scenario s;
  s.source_pos = {1.5, 0.0};
  s.sensor_pos = {{0.5, 0.0}};
  s.b = 10.0;
  s.a = 10.0;
  const NetworkParams net = build_network_params(s, {-1.0, 0.0});
  EXPECT_DOUBLE_EQ(net.beta(0), 10.0);
  EXPECT_DOUBLE_EQ(net.alpha(0), 10.0 / 2.25);

  s.sensor_pos = {{1.0, 0.0}};
  EXPECT_DOUBLE_EQ(build_network_params(s, {-1.0, 0.0}).alpha(0), 2.5);
}

TEST(Gains, CoincidentPositionIsClamped) {
  Scenario s = three_sensors();
  std::vector<GainWarning> warnings;
  const NetworkParams net = build_network_params(s, s.sensor_pos[1], &warnings);
  EXPECT_TRUE(std::isfinite(net.alpha(1)));
  EXPECT_DOUBLE_EQ(net.alpha(1), s.a / (kMinDistance * kMinDistance));
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(warnings[0].sensor, 1u);
  EXPECT_FALSE(warnings[0].sensing);
}

TEST(Gains, WeightsDefaultToOnes) {
  const NetworkParams net = build_network_params(three_sensors(), {-1.0, 0.0});
  EXPECT_EQ(net.gamma, Eigen::VectorXd::Ones(3));
  EXPECT_EQ(net.r, Eigen::VectorXd::Ones(3));
}

TEST(Validate, WellFormed) {
  EXPECT_TRUE(validate_scenario(three_sensors()).empty());
}

TEST(Validate, NegativeConstant) {
  Scenario s = three_sensors();
  s.b = -1.0;
  const auto diags = validate_scenario(s);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].kind, DiagnosticKind::ConstantNonPositive);
}

TEST(Validate, GammaLength) {
  Scenario s = three_sensors();
  s.gamma = Eigen::VectorXd::Ones(2);
  const auto diags = validate_scenario(s);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].kind, DiagnosticKind::LengthMismatch);
}

TEST(Validate, CollectsEveryProblem) {
  Scenario s = three_sensors();
  s.a = 0.0;
  s.r = Eigen::VectorXd::Constant(3, -1.0);
  s.per_sensor_power = Eigen::VectorXd::Constant(3, -2.0);
  s.av_start = {5.0, 0.0};
  const auto diags = validate_scenario(s);
  EXPECT_TRUE(has(diags, DiagnosticKind::ConstantNonPositive));
  EXPECT_TRUE(has(diags, DiagnosticKind::WeightNonPositive));
  EXPECT_TRUE(has(diags, DiagnosticKind::PowerNegative));
  EXPECT_TRUE(has(diags, DiagnosticKind::StartOutsideGrid));
}

TEST(Validate, NoSensors) {
  Scenario s;
  s.per_sensor_power = Eigen::VectorXd();
  EXPECT_TRUE(has(validate_scenario(s), DiagnosticKind::NoSensors));
}

TEST(ScenarioIo, RoundTrip) {
  Scenario s = three_sensors();
  s.gamma = Eigen::Vector3d(1.0, 1.0, 4.0);
  s.seed = 17;
  const Scenario back = scenario_from_json(to_json(s));
  ASSERT_EQ(back.sensor_count(), 3);
  EXPECT_EQ(back.sensor_pos[2], s.sensor_pos[2]);
  EXPECT_EQ(back.gamma, s.gamma);
  EXPECT_EQ(*back.per_sensor_power, *s.per_sensor_power);
  EXPECT_EQ(back.seed, 17u);
  EXPECT_EQ(back.a, s.a);
}

TEST(ScenarioIo, UnknownKeyRejected) {
  nlohmann::json j = to_json(three_sensors());
  j["sensor"] = 1;
  try {
    scenario_from_json(j);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::ParseError);
  }
}

TEST(ScenarioIo, MalformedValues) {
  EXPECT_THROW(scenario_from_json(nlohmann::json::parse(R"({"sensors": [[0, 0]], "a": "one", "b": 1})")), Error);
  EXPECT_THROW(scenario_from_json(nlohmann::json::parse(R"({"sensors": [[0]], "a": 1, "b": 1})")), Error);
  EXPECT_THROW(scenario_from_json(nlohmann::json::parse(R"({"sensors": [[0, 0]], "b": 1})")), Error);
  EXPECT_THROW(load_scenario("/nonexistent/scenario.json"), Error);
}

TEST(ScenarioIo, BundledScenariosAreValid) {
  for (const char* name : {"topology1.json", "topology2_small_sensing.json", "topology2_small_comm.json",
                           "single_sensor.json", "symmetric_pair.json"}) {
    const Scenario s = load_scenario(std::string(PDM_TEST_SCENARIO_DIR) + "/" + name);
    EXPECT_TRUE(validate_scenario(s).empty()) << name;
  }
}

TEST(Scenario, PowerFallbacks) {
  Scenario s = three_sensors();
  s.per_sensor_power.reset();
  s.total_power = 6.0;
  s.r = Eigen::Vector3d(1.0, 2.0, 3.0);
  EXPECT_NEAR(s.r.dot(s.fixed_powers()), 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(s.power_budget(), 6.0);

  Scenario f = three_sensors();
  EXPECT_DOUBLE_EQ(f.power_budget(), 30.0);
}
