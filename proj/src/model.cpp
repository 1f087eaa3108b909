#include "pdm/model.hpp"

#include <cmath>

namespace pdm {

const char* to_string(DiagnosticKind kind) {
  switch (kind) {
    case DiagnosticKind::NoSensors: return "NoSensors";
    case DiagnosticKind::LengthMismatch: return "LengthMismatch";
    case DiagnosticKind::ConstantNonPositive: return "ConstantNonPositive";
    case DiagnosticKind::WeightNonPositive: return "WeightNonPositive";
    case DiagnosticKind::PowerNegative: return "PowerNegative";
    case DiagnosticKind::PowerSpecification: return "PowerSpecification";
    case DiagnosticKind::GridInvalid: return "GridInvalid";
    case DiagnosticKind::StartOutsideGrid: return "StartOutsideGrid";
    case DiagnosticKind::NonFinite: return "NonFinite";
  }
  return "Unknown";
}

Eigen::VectorXd Scenario::gamma_or_ones() const {
  return gamma.size() == 0 ? Eigen::VectorXd::Ones(sensor_count()) : gamma;
}

Eigen::VectorXd Scenario::r_or_ones() const {
  return r.size() == 0 ? Eigen::VectorXd::Ones(sensor_count()) : r;
}

Eigen::VectorXd Scenario::fixed_powers() const {
  if (per_sensor_power) return *per_sensor_power;
  if (total_power) {
    const Eigen::VectorXd weights = r_or_ones();
    return Eigen::VectorXd::Constant(sensor_count(), *total_power / weights.sum());
  }
  throw Error(ErrorCode::InvalidInput, "scenario specifies neither powers nor total_power");
}

double Scenario::power_budget() const {
  if (total_power) return *total_power;
  if (per_sensor_power) return r_or_ones().dot(*per_sensor_power);
  throw Error(ErrorCode::InvalidInput, "scenario specifies neither powers nor total_power");
}

std::vector<Diagnostic> validate_scenario(const Scenario& s) {
  std::vector<Diagnostic> out;
  auto add = [&](DiagnosticKind kind, std::string msg) { out.push_back({kind, std::move(msg)}); };
  const Eigen::Index m = s.sensor_count();

  bool finite = s.source_pos.allFinite() && s.av_start.allFinite() && std::isfinite(s.a) &&
                std::isfinite(s.b);
  for (const auto& p : s.sensor_pos) finite = finite && p.allFinite();
  if (!finite) add(DiagnosticKind::NonFinite, "positions and constants must be finite");

  if (m == 0) add(DiagnosticKind::NoSensors, "at least one sensor is required");
  if (!(s.a > 0.0) || !(s.b > 0.0)) add(DiagnosticKind::ConstantNonPositive, "a and b must be positive");

  if (s.gamma.size() != 0 && s.gamma.size() != m)
    add(DiagnosticKind::LengthMismatch, "gamma length differs from sensor count");
  if (s.r.size() != 0 && s.r.size() != m)
    add(DiagnosticKind::LengthMismatch, "r length differs from sensor count");
  if (s.per_sensor_power && s.per_sensor_power->size() != m)
    add(DiagnosticKind::LengthMismatch, "powers length differs from sensor count");

  if ((s.gamma.array() <= 0.0).any() || (s.r.array() <= 0.0).any())
    add(DiagnosticKind::WeightNonPositive, "gamma and r must be positive");

  if (s.per_sensor_power.has_value() == s.total_power.has_value())
    add(DiagnosticKind::PowerSpecification, "exactly one of powers / total_power must be given");
  if ((s.per_sensor_power && (s.per_sensor_power->array() < 0.0).any()) ||
      (s.total_power && !(*s.total_power >= 0.0)))
    add(DiagnosticKind::PowerNegative, "powers must be non-negative");

  const auto& g = s.grid;
  if (!(g.step > 0.0) || !(g.x_max > g.x_min) || !(g.y_max > g.y_min))
    add(DiagnosticKind::GridInvalid, "grid needs step > 0 and non-empty extents");
  else if (!g.contains(s.av_start))
    add(DiagnosticKind::StartOutsideGrid, "av_start lies outside the grid");

  return out;
}

NetworkParams build_network_params(const Scenario& s, const Point2& av_pos,
                                   std::vector<GainWarning>* warnings) {
  const Eigen::Index m = s.sensor_count();
  NetworkParams net;
  net.alpha.resize(m);
  net.beta.resize(m);
  auto inverse_square = [&](double scale, const Point2& from, const Point2& to, std::size_t i,
                            bool sensing) {
    double d_sq = (from - to).squaredNorm();
    if (d_sq < kMinDistance * kMinDistance) {
      if (warnings) warnings->push_back({i, sensing, std::sqrt(d_sq)});
      d_sq = kMinDistance * kMinDistance;
    }
    return scale / d_sq;
  };
  for (Eigen::Index i = 0; i < m; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    net.alpha(i) = inverse_square(s.a, av_pos, s.sensor_pos[idx], idx, false);
    net.beta(i) = inverse_square(s.b, s.source_pos, s.sensor_pos[idx], idx, true);
  }
  net.gamma = s.gamma_or_ones();
  net.r = s.r_or_ones();
  return net;
}

}  // namespace pdm
