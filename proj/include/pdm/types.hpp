#ifndef PDM_TYPES_HPP
#define PDM_TYPES_HPP

#include <Eigen/Dense>

#include <optional>
#include <string>

#include "pdm/error.hpp"

namespace pdm {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using Point2 = Eigen::Vector2d;

/// Per-sensor gains of an M-sensor Gaussian network.
///
/// alpha: sensor-to-collector channel gains, beta: source-to-sensor sensing
/// gains, gamma: field-reconstruction weights, r: power weights of the
/// sum-power budget.
template <typename Scalar>
struct NetworkParamsT {
  Vector<Scalar> alpha;
  Vector<Scalar> beta;
  Vector<Scalar> gamma;
  Vector<Scalar> r;

  Eigen::Index size() const { return alpha.size(); }

  /// Builds a network with unit field and power weights.
  static NetworkParamsT unit_weights(Vector<Scalar> alpha, Vector<Scalar> beta) {
    const Eigen::Index m = alpha.size();
    return {std::move(alpha), std::move(beta), Vector<Scalar>::Ones(m), Vector<Scalar>::Ones(m)};
  }

  template <typename Other>
  NetworkParamsT<Other> cast() const {
    return {alpha.template cast<Other>(), beta.template cast<Other>(),
            gamma.template cast<Other>(), r.template cast<Other>()};
  }

  /// Throws InvalidInput if lengths disagree or any gain is non-positive.
  void check() const {
    const Eigen::Index m = alpha.size();
    if (m < 1) throw Error(ErrorCode::InvalidInput, "network needs at least one sensor");
    if (beta.size() != m || gamma.size() != m || r.size() != m)
      throw Error(ErrorCode::InvalidInput, "alpha, beta, gamma and r must have equal length");
    if ((alpha.array() <= Scalar(0)).any() || (beta.array() <= Scalar(0)).any())
      throw Error(ErrorCode::InvalidInput, "alpha and beta must be positive");
    if ((gamma.array() <= Scalar(0)).any() || (r.array() <= Scalar(0)).any())
      throw Error(ErrorCode::InvalidInput, "gamma and r must be positive");
  }
};

using NetworkParams = NetworkParamsT<double>;

/// Per-sensor transmit powers and their weighted total sum_m r_m p_m.
struct PowerAllocation {
  Eigen::VectorXd p;
  double weighted_total = 0.0;

  PowerAllocation() = default;
  PowerAllocation(Eigen::VectorXd powers, const Eigen::VectorXd& r)
      : p(std::move(powers)), weighted_total(r.dot(p)) {}

  static PowerAllocation uniform(const Eigen::VectorXd& r, double per_sensor) {
    return {Eigen::VectorXd::Constant(r.size(), per_sensor), r};
  }
};

/// A distortion bound value. `valid` is false when a formula was evaluated
/// outside the regime in which it is a bound.
template <typename Scalar>
struct BoundValueT {
  Scalar distortion{};
  std::optional<Vector<Scalar>> components;
  bool valid = true;
};

using BoundValue = BoundValueT<double>;

enum class Objective { SR, FR };
enum class Bound { Upper, Lower };
enum class PowerMode { Fixed, Optimized };
enum class FrLowerMode { HighRate, Exact };

/// Selects one of the eight power-distortion metrics.
struct MetricSpec {
  Objective objective = Objective::SR;
  Bound bound = Bound::Upper;
  PowerMode power = PowerMode::Fixed;
  std::optional<FrLowerMode> fr_lower_mode;

  bool is_fr_lower() const { return objective == Objective::FR && bound == Bound::Lower; }
  FrLowerMode lower_mode() const { return fr_lower_mode.value_or(FrLowerMode::Exact); }

  bool operator==(const MetricSpec&) const = default;

  /// Canonical name, e.g. "sr-upper-fixed" or "fr-lower-opt-highrate".
  std::string name() const;
  static MetricSpec parse(const std::string& name);
  static MetricSpec make(Objective o, Bound b, PowerMode p);
};

}  // namespace pdm

#endif  // PDM_TYPES_HPP
