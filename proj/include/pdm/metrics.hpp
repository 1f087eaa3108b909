#ifndef PDM_METRICS_HPP
#define PDM_METRICS_HPP

// Fixed-power distortion bounds for source reconstruction (SR) and field
// reconstruction (FR). Upper bounds are the exact MSE of amplify-and-forward
// with an LMMSE receiver; lower bounds combine the MAC sum-rate with the
// remote / vector Gaussian rate-distortion functions.

#include <cmath>

#include "pdm/rate_distortion.hpp"
#include "pdm/types.hpp"

namespace pdm {

/// Second-order statistics of the AF scheme X_m = sqrt(P_m / (1 + beta_m^2)) U_m.
template <typename Scalar>
struct AfTerms {
  Vector<Scalar> c;  // alpha_m sqrt(P_m / (1 + beta_m^2))
  Scalar a{};        // E{SY} = sum_m beta_m c_m
  Scalar q{};        // sum_m c_m^2
  Scalar b{};        // sum_m beta_m^2

  /// E{Y^2} = 1 + a^2 + q, also the argument of the MAC sum-rate.
  Scalar received_power() const { return Scalar(1) + a * a + q; }
};

template <typename Scalar>
AfTerms<Scalar> af_terms(const NetworkParamsT<Scalar>& net, const Vector<Scalar>& p) {
  if (p.size() != net.size())
    throw Error(ErrorCode::InvalidInput, "power vector length does not match sensor count");
  if ((p.array() < Scalar(0)).any()) throw Error(ErrorCode::InvalidInput, "powers must be non-negative");
  AfTerms<Scalar> t;
  const Vector<Scalar> beta_sq = net.beta.array().square();
  t.c = net.alpha.array() * (p.array() / (Scalar(1) + beta_sq.array())).sqrt();
  t.a = net.beta.dot(t.c);
  t.q = t.c.squaredNorm();
  t.b = beta_sq.sum();
  return t;
}

/// Sum-rate (bits) of the MAC seen by AF inputs: 1/2 log2(1 + a^2 + q).
template <typename Scalar>
Scalar mac_rate_bits(const NetworkParamsT<Scalar>& net, const Vector<Scalar>& p) {
  using std::log2;
  return Scalar(0.5) * log2(af_terms(net, p).received_power());
}

template <typename Scalar>
BoundValueT<Scalar> sr_upper(const NetworkParamsT<Scalar>& net, const Vector<Scalar>& p) {
  const auto t = af_terms(net, p);
  return {(Scalar(1) + t.q) / t.received_power(), std::nullopt, true};
}

template <typename Scalar>
BoundValueT<Scalar> sr_lower(const NetworkParamsT<Scalar>& net, const Vector<Scalar>& p) {
  const auto t = af_terms(net, p);
  return {(Scalar(1) + t.b / t.received_power()) / (Scalar(1) + t.b), std::nullopt, true};
}

/// Weighted AF field error sum_m gamma_m J_m, with J_m the LMMSE error of U_m from Y.
template <typename Scalar>
BoundValueT<Scalar> fr_upper(const NetworkParamsT<Scalar>& net, const Vector<Scalar>& p) {
  const auto t = af_terms(net, p);
  const Vector<Scalar> cross = t.c + net.beta * t.a;  // E{U_m Y}
  Vector<Scalar> j = (Scalar(1) + net.beta.array().square()).matrix() -
                     (cross.array().square() / t.received_power()).matrix();
  BoundValueT<Scalar> out;
  out.distortion = net.gamma.dot(j);
  out.components = std::move(j);
  return out;
}

/// Unit-weight field error written as M + |beta|^2 - (q + (2 + |beta|^2) a^2) / E{Y^2}.
/// Ignores gamma; an independent route to fr_upper when gamma = 1.
template <typename Scalar>
Scalar fr_upper_unit_gamma(const NetworkParamsT<Scalar>& net, const Vector<Scalar>& p) {
  const auto t = af_terms(net, p);
  const Scalar m = Scalar(net.size());
  return m + t.b - (t.q + (Scalar(2) + t.b) * t.a * t.a) / t.received_power();
}

/// FR lower bound at the MAC sum-rate. HighRate evaluates the closed form that
/// assumes all eigen-components active and flags valid=false when they are not;
/// Exact runs reverse water-filling.
template <typename Scalar>
BoundValueT<Scalar> fr_lower_at_rate(const EigenStructureT<Scalar>& eig, Scalar rate_bits,
                                     FrLowerMode mode) {
  if (mode == FrLowerMode::Exact) return {vector_rd_exact(eig, rate_bits), std::nullopt, true};
  return {vector_rd_highrate(eig, rate_bits), std::nullopt, highrate_regime(eig, rate_bits)};
}

template <typename Scalar>
BoundValueT<Scalar> fr_lower(const NetworkParamsT<Scalar>& net, const Vector<Scalar>& p,
                             FrLowerMode mode = FrLowerMode::Exact) {
  const auto eig = ru_eigen(net.beta, net.gamma);
  return fr_lower_at_rate(eig, mac_rate_bits(net, p), mode);
}

/// I(S; S_hat) in bits for a jointly Gaussian estimate with MSE `distortion`.
template <typename Scalar>
Scalar mutual_info_bits(Scalar distortion) {
  using std::log2;
  if (!(distortion > Scalar(0) && distortion <= Scalar(1)))
    throw Error(ErrorCode::DomainError, "SR distortion must lie in (0, 1]");
  return Scalar(-0.5) * log2(distortion);
}

}  // namespace pdm

#endif  // PDM_METRICS_HPP
