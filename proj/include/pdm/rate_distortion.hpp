#ifndef PDM_RATE_DISTORTION_HPP
#define PDM_RATE_DISTORTION_HPP

// Remote (noisy-observation) rate-distortion of the scalar source and the
// weighted vector rate-distortion of the sensor observations U = beta S + W.
// Rates are in bits at every public entry point.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "pdm/types.hpp"

namespace pdm {

template <typename Scalar>
struct RemoteRdParamsT {
  Scalar sigma_t_sq;  // variance of the sufficient statistic E{S|U}
  Scalar d_est;       // irreducible estimation error of S from U
};

using RemoteRdParams = RemoteRdParamsT<double>;

template <typename Derived>
auto sufficient_stat_params(const Eigen::MatrixBase<Derived>& beta) {
  using Scalar = typename Derived::Scalar;
  const Scalar b = beta.squaredNorm();
  return RemoteRdParamsT<Scalar>{b / (Scalar(1) + b), Scalar(1) / (Scalar(1) + b)};
}

/// D(R) = D_est + sigma_T^2 2^{-2R}, written as (1 + |beta|^2 2^{-2R}) / (1 + |beta|^2)
/// so that D(0) == 1 exactly.
template <typename Derived>
typename Derived::Scalar remote_rd_distortion(const Eigen::MatrixBase<Derived>& beta,
                                              typename Derived::Scalar rate_bits) {
  using Scalar = typename Derived::Scalar;
  using std::exp2;
  if (!(rate_bits >= Scalar(0))) throw Error(ErrorCode::DomainError, "rate must be non-negative");
  const Scalar b = beta.squaredNorm();
  return (Scalar(1) + b * exp2(Scalar(-2) * rate_bits)) / (Scalar(1) + b);
}

/// Eigen-structure of R_U = I + beta beta^T.
///
/// q is the Householder reflection mapping e_M onto beta/|beta|; it is
/// symmetric and orthogonal, so R_U = q^T diag(lambdas) q with lambdas =
/// (1, ..., 1, 1 + |beta|^2). gamma_prime_k = [q^T diag(gamma) q]_kk.
template <typename Scalar>
struct EigenStructureT {
  Vector<Scalar> lambdas;
  Matrix<Scalar> q;
  Vector<Scalar> gamma_prime;

  Eigen::Index size() const { return lambdas.size(); }

  /// Per-component water level thresholds Lambda_m gamma'_m.
  Vector<Scalar> weighted_variances() const { return lambdas.cwiseProduct(gamma_prime); }
};

using EigenStructure = EigenStructureT<double>;

template <typename DerivedB, typename DerivedG>
auto ru_eigen(const Eigen::MatrixBase<DerivedB>& beta, const Eigen::MatrixBase<DerivedG>& gamma) {
  using Scalar = typename DerivedB::Scalar;
  const Eigen::Index m = beta.size();
  if (m < 1 || gamma.size() != m)
    throw Error(ErrorCode::InvalidInput, "beta and gamma must be non-empty with equal length");

  const Scalar b = beta.squaredNorm();
  const Vector<Scalar> unit = beta / std::sqrt(b);

  // u = e_M - unit; the last entry is formed without cancellation.
  Vector<Scalar> u = -unit;
  const Scalar head = unit.head(m - 1).squaredNorm();
  u(m - 1) = head / (Scalar(1) + unit(m - 1));
  const Scalar uu = u.squaredNorm();

  EigenStructureT<Scalar> eig;
  eig.q = Matrix<Scalar>::Identity(m, m);
  if (uu > Scalar(0)) eig.q.noalias() -= (Scalar(2) / uu) * u * u.transpose();

  eig.lambdas = Vector<Scalar>::Ones(m);
  eig.lambdas(m - 1) += b;
  eig.gamma_prime = eig.q.array().square().matrix().transpose() * gamma;
  return eig;
}

/// Reverse water-filling solution at a given total rate.
template <typename Scalar>
struct WaterFill {
  Scalar theta{};       // water level; D_m = min(theta / gamma'_m, Lambda_m)
  Scalar distortion{};  // sum_m gamma'_m D_m
  Eigen::Index active = 0;
};

/// Solves min sum gamma'_m D_m s.t. sum_m (1/2 log2(Lambda_m / D_m))^+ = R.
///
/// The active set is always the k components with the largest
/// Lambda_m gamma'_m, so the level is found in closed form per candidate k.
template <typename Scalar>
WaterFill<Scalar> waterfill(const EigenStructureT<Scalar>& eig, Scalar rate_bits) {
  using std::exp2;
  using std::log2;
  if (!(rate_bits >= Scalar(0))) throw Error(ErrorCode::DomainError, "rate must be non-negative");
  const Vector<Scalar> w = eig.weighted_variances();
  const Eigen::Index m = w.size();

  std::vector<Scalar> sorted(w.data(), w.data() + m);
  std::sort(sorted.begin(), sorted.end(), std::greater<Scalar>());

  WaterFill<Scalar> out;
  if (rate_bits == Scalar(0)) {
    out.theta = sorted.front();
    out.distortion = w.sum();
    return out;
  }

  Scalar log_sum = 0;
  for (Eigen::Index k = 1; k <= m; ++k) {
    log_sum += log2(sorted[k - 1]);
    const Scalar theta = exp2((log_sum - Scalar(2) * rate_bits) / Scalar(k));
    const bool fits = theta <= sorted[k - 1];
    const bool rest_inactive = k == m || theta >= sorted[k];
    if (fits && rest_inactive) {
      out.theta = theta;
      out.active = k;
      Scalar inactive = 0;
      for (Eigen::Index j = k; j < m; ++j) inactive += sorted[j];
      out.distortion = Scalar(k) * theta + inactive;
      return out;
    }
  }
  // Unreachable for finite positive inputs; fall back to full activity.
  out.active = m;
  out.theta = exp2((log_sum - Scalar(2) * rate_bits) / Scalar(m));
  out.distortion = Scalar(m) * out.theta;
  return out;
}

template <typename Scalar>
Scalar vector_rd_exact(const EigenStructureT<Scalar>& eig, Scalar rate_bits) {
  return waterfill(eig, rate_bits).distortion;
}

/// Rate (bits) needed to reach a weighted distortion target; inverse of
/// vector_rd_exact on (0, sum Lambda gamma'].
template <typename Scalar>
Scalar vector_rd_rate(const EigenStructureT<Scalar>& eig, Scalar distortion) {
  using std::log2;
  const Vector<Scalar> w = eig.weighted_variances();
  if (!(distortion > Scalar(0))) throw Error(ErrorCode::DomainError, "distortion must be positive");
  if (distortion >= w.sum()) return Scalar(0);

  std::vector<Scalar> asc(w.data(), w.data() + w.size());
  std::sort(asc.begin(), asc.end());
  // D(theta) = sum_m min(theta, w_m) is piecewise linear and increasing.
  Scalar below = 0;
  const auto m = static_cast<Eigen::Index>(asc.size());
  Scalar theta = 0;
  for (Eigen::Index j = 0; j < m; ++j) {
    const Scalar candidate = (distortion - below) / Scalar(m - j);
    if (candidate <= asc[j]) {
      theta = candidate;
      break;
    }
    below += asc[j];
  }
  Scalar rate = 0;
  for (Scalar wm : asc)
    if (theta < wm) rate += Scalar(0.5) * log2(wm / theta);
  return rate;
}

/// High-rate closed form M ((1+|beta|^2) prod gamma')^{1/M} 2^{-2R/M}, which
/// assumes every component is active. Never exceeds vector_rd_exact.
template <typename Scalar>
Scalar vector_rd_highrate(const EigenStructureT<Scalar>& eig, Scalar rate_bits) {
  using std::exp2;
  using std::log2;
  if (!(rate_bits >= Scalar(0))) throw Error(ErrorCode::DomainError, "rate must be non-negative");
  const Scalar m = Scalar(eig.size());
  const Scalar log_det = eig.weighted_variances().array().log2().sum();
  return m * exp2((log_det - Scalar(2) * rate_bits) / m);
}

/// True when the high-rate water level theta = D/M leaves every component active.
template <typename Scalar>
bool highrate_regime(const EigenStructureT<Scalar>& eig, Scalar rate_bits) {
  const Scalar theta = vector_rd_highrate(eig, rate_bits) / Scalar(eig.size());
  return theta <= eig.weighted_variances().minCoeff();
}

}  // namespace pdm

#endif  // PDM_RATE_DISTORTION_HPP
