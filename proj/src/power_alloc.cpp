#include "pdm/power_alloc.hpp"

#include <cmath>
#include <limits>

namespace pdm {

namespace {

using Real = Multiplier;

constexpr int kMaxBisection = 200;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Bisection for a monotone residual with f(lo) and f(hi) of opposite sign.
/// Returns the endpoint with the smaller |f| once the bracket stops shrinking.
template <typename F>
Real bisect(F&& f, Real lo, Real hi, bool increasing) {
  for (int it = 0; it < kMaxBisection; ++it) {
    const Real mid = lo + (hi - lo) / 2;
    if (!(mid > lo && mid < hi)) break;
    const Real v = f(mid);
    if (v == 0) return mid;
    if ((v < 0) == increasing) lo = mid;
    else hi = mid;
  }
  const Real flo = f(lo);
  const Real fhi = f(hi);
  if (!std::isfinite(static_cast<double>(fhi))) return lo;
  if (!std::isfinite(static_cast<double>(flo))) return hi;
  return std::fabs(flo) <= std::fabs(fhi) ? lo : hi;
}

/// Smallest pole r_m (1 + beta_m^2) / alpha_m^2 of the multiplier equations.
Real pole(const NetworkParams& net) {
  Real best = std::numeric_limits<Real>::infinity();
  for (Eigen::Index m = 0; m < net.size(); ++m) {
    const Real a2 = Real(net.alpha(m)) * net.alpha(m);
    const Real b2 = Real(net.beta(m)) * net.beta(m);
    best = std::min(best, Real(net.r(m)) * (1 + b2) / a2);
  }
  return best;
}

/// sum_m alpha^2 beta^2 / (r (1 + beta^2) + shift alpha^2)
Real shifted_sum(const NetworkParams& net, Real shift) {
  Real s = 0;
  for (Eigen::Index m = 0; m < net.size(); ++m) {
    const Real a2 = Real(net.alpha(m)) * net.alpha(m);
    const Real b2 = Real(net.beta(m)) * net.beta(m);
    s += a2 * b2 / (Real(net.r(m)) * (1 + b2) + shift * a2);
  }
  return s;
}

Real sr_equation(const NetworkParams& net, Real lambda) {
  return lambda * shifted_sum(net, -lambda) - 1;
}

Real fr_equation(const NetworkParams& net, Real total_power, Real lambda1) {
  const Real b = Real(net.beta.squaredNorm());
  return ((1 + b) * (total_power - lambda1) - lambda1) * shifted_sum(net, lambda1) - 1;
}

BroadcastRecipe budget_recipe(const NetworkParams& net, Real shift, double total_power) {
  BroadcastRecipe recipe;
  recipe.shift = shift;
  recipe.scale_sq = 1.0;
  Eigen::VectorXd shape(net.size());
  for (Eigen::Index m = 0; m < net.size(); ++m)
    shape(m) = recipe.shape(net.alpha(m), net.beta(m), net.r(m));

  // Sensors whose share falls under the floor are switched off and the
  // budget is renormalized over the rest.
  Eigen::Array<bool, Eigen::Dynamic, 1> on = Eigen::Array<bool, Eigen::Dynamic, 1>::Constant(net.size(), true);
  for (int pass = 0; pass < 4; ++pass) {
    double weighted = 0.0;
    for (Eigen::Index m = 0; m < net.size(); ++m)
      if (on(m)) weighted += net.r(m) * shape(m);
    recipe.scale_sq = total_power / weighted;
    bool changed = false;
    for (Eigen::Index m = 0; m < net.size(); ++m) {
      if (on(m) && recipe.scale_sq * shape(m) < recipe.floor) {
        on(m) = false;
        changed = true;
      }
    }
    if (!changed || !on.any()) break;
  }
  return recipe;
}

void check_budget(double total_power) {
  if (!(total_power > 0.0) || !std::isfinite(total_power))
    throw Error(ErrorCode::InvalidInput, "total power must be positive and finite");
}

bool unit_gamma(const NetworkParams& net) {
  return ((net.gamma.array() - 1.0).abs() <= 1e-12).all();
}

}  // namespace

double BroadcastRecipe::shape(double alpha, double beta, double r) const {
  const Multiplier a2 = Multiplier(alpha) * alpha;
  const Multiplier b2 = Multiplier(beta) * beta;
  const Multiplier den = r * (1 + b2) + shift * a2;
  return static_cast<double>(a2 * b2 * (1 + b2) / (den * den));
}

double BroadcastRecipe::power(double alpha, double beta, double r) const {
  const double p = scale_sq * shape(alpha, beta, r);
  return p < floor ? 0.0 : p;
}

Eigen::VectorXd BroadcastRecipe::powers(const NetworkParams& net) const {
  Eigen::VectorXd p(net.size());
  for (Eigen::Index m = 0; m < net.size(); ++m) p(m) = power(net.alpha(m), net.beta(m), net.r(m));
  return p;
}

double lambda_sr_residual(const NetworkParams& net, Multiplier lambda) {
  return static_cast<double>(std::fabs(sr_equation(net, lambda)));
}

double lambda_fr_residual(const NetworkParams& net, double total_power, Multiplier lambda1) {
  return static_cast<double>(std::fabs(fr_equation(net, total_power, lambda1)));
}

Multiplier solve_lambda_sr(const NetworkParams& net) {
  net.check();
  const Real hi = pole(net);
  if (!(hi > 0) || !std::isfinite(static_cast<double>(hi)))
    throw Error(ErrorCode::BracketFailure, "multiplier bracket (0, min r(1+beta^2)/alpha^2) is empty");
  return bisect([&](Real l) { return sr_equation(net, l); }, 0, hi, true);
}

FrMultipliers solve_lambda_fr(const NetworkParams& net, double total_power) {
  net.check();
  check_budget(total_power);
  FrMultipliers out;
  out.lambda2 = solve_lambda_sr(net);
  out.residual2 = lambda_sr_residual(net, out.lambda2);

  const Real pt = total_power;
  const Real b = Real(net.beta.squaredNorm());
  auto f = [&](Real l) { return fr_equation(net, pt, l); };
  Real root;
  if (f(0) > 0) {
    // The left factor vanishes at P_T (1 + |beta|^2) / (2 + |beta|^2) < P_T.
    root = bisect(f, 0, pt * (1 + b) / (2 + b), false);
  } else {
    // Low-power regime: the fixed point lies in (-min r(1+beta^2)/alpha^2, 0].
    out.lambda1_in_bracket = false;
    const Real lo = -pole(net);
    if (!(lo < 0)) throw Error(ErrorCode::BracketFailure, "FR multiplier bracket is empty");
    root = f(0) == 0 ? Real(0) : bisect(f, lo, 0, false);
  }
  out.lambda1 = root;
  out.residual1 = lambda_fr_residual(net, total_power, out.lambda1);
  return out;
}

OptResult sr_lower_opt(const NetworkParams& net, double total_power) {
  check_budget(total_power);
  const Multiplier lambda = solve_lambda_sr(net);
  const double b = net.beta.squaredNorm();

  OptResult out;
  out.lambda = lambda;
  out.residual = lambda_sr_residual(net, lambda);
  out.value = (1.0 + b / (1.0 + static_cast<double>(total_power / lambda))) / (1.0 + b);
  out.recipe = budget_recipe(net, -lambda, total_power);
  out.lambda2 = 2.0 * std::sqrt(out.recipe.scale_sq);
  out.allocation = PowerAllocation(out.recipe.powers(net), net.r);
  return out;
}

OptResult sr_upper_opt(const NetworkParams& net, double total_power) {
  net.check();
  check_budget(total_power);
  const Eigen::ArrayXd a2 = net.alpha.array().square();
  const Eigen::ArrayXd b2 = net.beta.array().square();
  const double g = total_power * (a2 * b2 / (net.r.array() * (1.0 + b2) + total_power * a2)).sum();

  OptResult out;
  out.lambda = kNaN;
  out.value = 1.0 / (1.0 + g);
  out.recipe = budget_recipe(net, total_power, total_power);
  out.lambda2 = 2.0 * std::sqrt(out.recipe.scale_sq);
  out.allocation = PowerAllocation(out.recipe.powers(net), net.r);
  return out;
}

OptResult fr_upper_opt(const NetworkParams& net, double total_power) {
  if (!unit_gamma(net))
    throw Error(ErrorCode::NonUnitGamma, "FR upper optimization assumes unit field weights");
  const FrMultipliers mult = solve_lambda_fr(net, total_power);
  const double m = static_cast<double>(net.size());
  const double b = net.beta.squaredNorm();

  OptResult out;
  out.lambda = mult.lambda1;
  out.residual = mult.residual1;
  out.value = m + b + static_cast<double>(total_power / (mult.lambda1 - total_power));
  out.recipe = budget_recipe(net, mult.lambda1, total_power);
  out.lambda2 = 2.0 * std::sqrt(out.recipe.scale_sq);
  out.allocation = PowerAllocation(out.recipe.powers(net), net.r);
  if (!mult.lambda1_in_bracket) {
    out.valid = false;
    out.notes.push_back("FixedPointDivergence: no FR multiplier root in (0, P_T); "
                        "used the low-power branch lambda1 <= 0");
  }
  return out;
}

OptResult fr_lower_opt(const NetworkParams& net, double total_power, FrLowerMode mode) {
  using std::log2;
  OptResult out = sr_lower_opt(net, total_power);
  const auto eig = ru_eigen(net.beta, net.gamma);
  const double rate = 0.5 * log2(1.0 + static_cast<double>(total_power / out.lambda));
  const BoundValue bound = fr_lower_at_rate(eig, rate, mode);
  out.value = bound.distortion;
  out.valid = bound.valid;

  const double m = static_cast<double>(net.size());
  const double log_det = eig.weighted_variances().array().log2().sum();
  out.asymptote = m * std::exp2((log_det + log2(static_cast<double>(out.lambda / total_power))) / m);
  out.asymptote_valid = *out.asymptote < eig.weighted_variances().sum();
  return out;
}

FrBounds fr_bounds_opt(const NetworkParams& net, double total_power, FrLowerMode mode) {
  return {fr_upper_opt(net, total_power), fr_lower_opt(net, total_power, mode)};
}

OptResult optimize(const MetricSpec& spec, const NetworkParams& net, double total_power) {
  if (spec.objective == Objective::SR)
    return spec.bound == Bound::Upper ? sr_upper_opt(net, total_power) : sr_lower_opt(net, total_power);
  return spec.bound == Bound::Upper ? fr_upper_opt(net, total_power)
                                    : fr_lower_opt(net, total_power, spec.lower_mode());
}

}  // namespace pdm
