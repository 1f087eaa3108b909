#ifndef PDM_ORACLE_HPP
#define PDM_ORACLE_HPP

// Ground truth independent of the closed forms: Monte Carlo simulation of
// amplify-and-forward over the MAC, exhaustive searches over the power
// simplex and over rate splits, and the matched/mismatched channel study.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "pdm/types.hpp"

namespace pdm {

/// Seedable generator with a fixed stream order.
///
/// The engine is std::mt19937_64 (bit-exact across standard libraries),
/// seeded through SplitMix64 so shard streams derived from one master seed
/// are decorrelated. Uniforms use the top 53 bits; normals use Marsaglia's
/// polar method and emit both variates of each accepted pair in order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Independent stream number `index` under `master`.
  static Rng shard(std::uint64_t master, std::uint64_t index);

  double uniform();       // [0, 1)
  double uniform_left();  // (0, 1]
  double normal();

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t& state);

struct McConfig {
  std::size_t n_samples = 100000;
  std::uint64_t seed = 0;
};

struct McResult {
  double sr_mse = 0.0;
  double sr_se = 0.0;
  Eigen::VectorXd fr_mse;  // per sensor
  Eigen::VectorXd fr_se;
};

/// Simulates S, W_m, Z (drawn in that order per sample), forms
/// X_m = sqrt(P_m / (1 + beta_m^2)) U_m and Y = Z + sum alpha_m X_m, applies
/// the analytic LMMSE coefficients and averages the squared errors. Standard
/// errors come from the sample variance of the squared errors.
McResult mc_af_mse(const NetworkParams& net, const Eigen::VectorXd& p, const McConfig& cfg);

using BoundFn = std::function<double(const Eigen::VectorXd&)>;

struct BruteForceResult {
  double value = 0.0;
  Eigen::VectorXd allocation;
};

/// Minimum of `bound` over {P >= 0 : sum r_m P_m = P_T} on a grid of budget
/// shares r_m P_m / P_T with spacing `resolution`. M <= 3.
BruteForceResult brute_force_power(const BoundFn& bound, const Eigen::VectorXd& r, double total_power,
                                   double resolution);

/// Minimum of sum_m gamma'_m Lambda_m 2^{-2 R_m} over rate splits R_m >= 0
/// with sum R_m = R, R_m on a grid of spacing `resolution` bits. M <= 3.
double brute_force_waterfill(const Eigen::VectorXd& lambdas, const Eigen::VectorXd& gamma_prime,
                             double rate_bits, double resolution);

struct BoundMeans {
  Eigen::VectorXd sr_upper, sr_lower, fr_upper, fr_lower;  // one entry per sweep point

  Eigen::VectorXd sr_gap() const { return sr_upper - sr_lower; }
  Eigen::VectorXd fr_gap() const { return fr_upper - fr_lower; }
};

struct GapExperiment {
  std::vector<double> sweep;  // per-sensor power P; optimized mode uses P_T = M P
  PowerMode mode = PowerMode::Fixed;
  FrLowerMode fr_lower_mode = FrLowerMode::Exact;
  std::size_t trials = 0;
  BoundMeans matched;
  BoundMeans mismatched;
};

/// Decade grid 10^lo, ..., 10^hi with `per_decade` points per decade.
std::vector<double> decade_grid(int lo, int hi, int per_decade = 1);

/// Averages all four bounds over random alpha, beta ~ U(0, 1], sorted into the
/// matched pairing (larger beta with larger alpha) and the reverse pairing.
/// Trial t draws alpha_1..alpha_M then beta_1..beta_M from Rng::shard(seed, t).
GapExperiment matched_mismatched_experiment(int sensors, std::size_t trials, std::uint64_t seed,
                                            PowerMode mode, const std::vector<double>& sweep,
                                            FrLowerMode fr_mode = FrLowerMode::Exact);

}  // namespace pdm

#endif  // PDM_ORACLE_HPP
