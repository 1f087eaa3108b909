#ifndef PDM_MODEL_HPP
#define PDM_MODEL_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pdm/types.hpp"

namespace pdm {

/// Distances below this are clamped before the inverse-square law.
inline constexpr double kMinDistance = 1e-6;

struct GridSpec {
  double x_min = -1.5;
  double x_max = 1.5;
  double y_min = -1.75;
  double y_max = 1.75;
  double step = 0.01;

  bool contains(const Point2& p, double tol = 1e-9) const {
    return p.x() >= x_min - tol && p.x() <= x_max + tol && p.y() >= y_min - tol &&
           p.y() <= y_max + tol;
  }
};

/// Planar deployment: one source, M static sensors and a mobile collector.
/// Gains follow the inverse-square law beta_m = b / |x_s - x_m|^2 and
/// alpha_m = a / |x_av - x_m|^2.
struct Scenario {
  Point2 source_pos{1.5, 0.0};
  std::vector<Point2> sensor_pos;
  Point2 av_start{-1.0, 0.0};
  double a = 1.0;
  double b = 1.0;
  GridSpec grid;
  std::optional<Eigen::VectorXd> per_sensor_power;
  std::optional<double> total_power;
  Eigen::VectorXd gamma;  // empty means all ones
  Eigen::VectorXd r;      // empty means all ones
  std::uint64_t seed = 0;

  Eigen::Index sensor_count() const { return static_cast<Eigen::Index>(sensor_pos.size()); }
  Eigen::VectorXd gamma_or_ones() const;
  Eigen::VectorXd r_or_ones() const;

  /// Fixed per-sensor powers; a lone total budget is split uniformly in r.
  Eigen::VectorXd fixed_powers() const;
  /// Weighted budget P_T; falls back to sum_m r_m P_m of the fixed powers.
  double power_budget() const;
};

enum class DiagnosticKind {
  NoSensors,
  LengthMismatch,
  ConstantNonPositive,
  WeightNonPositive,
  PowerNegative,
  PowerSpecification,
  GridInvalid,
  StartOutsideGrid,
  NonFinite,
};

const char* to_string(DiagnosticKind kind);

struct Diagnostic {
  DiagnosticKind kind;
  std::string message;
};

/// Every violated scenario invariant, in a stable order. Empty iff valid.
std::vector<Diagnostic> validate_scenario(const Scenario& scenario);

struct GainWarning {
  std::size_t sensor;
  bool sensing;  // true for beta, false for alpha
  double distance;
};

/// Network gains at a collector position. Coincident positions are clamped
/// to kMinDistance and reported through `warnings` when provided.
NetworkParams build_network_params(const Scenario& scenario, const Point2& av_pos,
                                   std::vector<GainWarning>* warnings = nullptr);

}  // namespace pdm

#endif  // PDM_MODEL_HPP
