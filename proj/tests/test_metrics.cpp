#include <gtest/gtest.h>

#include <cmath>

#include "pdm/evaluate.hpp"
#include "pdm/metrics.hpp"
#include "pdm/oracle.hpp"
#include "test_util.hpp"

using namespace pdm;
using pdm::test::network;
using pdm::test::ones;
using pdm::test::vec;

TEST(SrUpper, SingleUnitSensor) {
  EXPECT_NEAR(sr_upper(ones(1), vec({1})).distortion, 0.75, 1e-15);
}

TEST(SrUpper, ZeroPowerIsPrior) {
  const NetworkParams net = network({0.3, 2.0, 0.7}, {1.5, 0.2, 0.9});
  EXPECT_EQ(sr_upper(net, Eigen::VectorXd(Eigen::VectorXd::Zero(3))).distortion, 1.0);
}

TEST(SrUpper, SymmetricPair) {
  EXPECT_NEAR(sr_upper(ones(2), vec({1, 1})).distortion, 0.5, 1e-15);
  EXPECT_NEAR(sr_lower(ones(2), vec({1, 1})).distortion, 0.5, 1e-15);
}

TEST(SrLower, ZeroPowerIsPrior) {
  const NetworkParams net = network({0.3, 2.0}, {1.5, 0.2});
  EXPECT_DOUBLE_EQ(sr_lower(net, Eigen::VectorXd(Eigen::VectorXd::Zero(2))).distortion, 1.0);
}

TEST(SrLower, SingleUnitSensor) {
  EXPECT_NEAR(sr_lower(ones(1), vec({1})).distortion, 0.75, 1e-15);
}

TEST(SrLower, HighPowerApproachesEstimationFloor) {
  EXPECT_NEAR(sr_lower(ones(2), vec({1e8, 1e8})).distortion, 1.0 / 3.0, 1e-6);
}

TEST(FrUpper, SingleUnitSensor) {
  EXPECT_NEAR(fr_upper(ones(1), vec({1})).distortion, 1.0, 1e-15);
}

TEST(FrUpper, ZeroPowerIsWeightedPrior) {
  NetworkParams net = network({0.4, 1.1, 2.0}, {0.5, 1.0, 2.0});
  EXPECT_NEAR(fr_upper(net, Eigen::VectorXd(Eigen::VectorXd::Zero(3))).distortion, 3.0 + 0.25 + 1.0 + 4.0, 1e-14);

  NetworkParams weighted = ones(2);
  weighted.gamma = vec({1, 4});
  EXPECT_DOUBLE_EQ(fr_upper(weighted, Eigen::VectorXd(Eigen::VectorXd::Zero(2))).distortion, 10.0);
}

TEST(FrUpper, ComponentsAreUnweightedPerSensorErrors) {
  NetworkParams net = network({0.4, 1.1}, {0.5, 2.0});
  net.gamma = vec({2.0, 3.0});
  const BoundValue v = fr_upper(net, vec({1.0, 4.0}));
  ASSERT_TRUE(v.components);
  EXPECT_NEAR(v.distortion, 2.0 * (*v.components)(0) + 3.0 * (*v.components)(1), 1e-14);
}

TEST(FrUpper, AgreesWithUnitWeightIdentity) {
  Rng rng(11);
  for (int t = 0; t < 500; ++t) {
    const Eigen::Index m = 1 + t % 5;
    NetworkParams net = NetworkParams::unit_weights(Eigen::VectorXd(m), Eigen::VectorXd(m));
    Eigen::VectorXd p(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      net.alpha(i) = 2.0 * rng.uniform_left();
      net.beta(i) = 2.0 * rng.uniform_left();
      p(i) = 10.0 * rng.uniform();
    }
    const double direct = fr_upper(net, p).distortion;
    EXPECT_NEAR(direct, fr_upper_unit_gamma(net, p), 1e-12 * direct);
  }
}

TEST(FrLower, SingleUnitSensorBothModes) {
  EXPECT_NEAR(fr_lower(ones(1), vec({1}), FrLowerMode::Exact).distortion, 1.0, 1e-15);
  EXPECT_NEAR(fr_lower(ones(1), vec({1}), FrLowerMode::HighRate).distortion, 1.0, 1e-15);
}

TEST(FrLower, ZeroPowerIsPrior) {
  EXPECT_DOUBLE_EQ(fr_lower(ones(1), vec({0}), FrLowerMode::Exact).distortion, 2.0);
}

TEST(FrLower, HalfPowerSingleSensor) {
  const auto exact = fr_lower(ones(1), vec({0.5}), FrLowerMode::Exact);
  const auto high = fr_lower(ones(1), vec({0.5}), FrLowerMode::HighRate);
  EXPECT_NEAR(exact.distortion, 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(high.distortion, 4.0 / 3.0, 1e-15);
  EXPECT_TRUE(high.valid);
}

TEST(FrLower, HighRateFlaggedOutsideItsRegime) {
  // Tiny rate: the weak eigen-direction is not active.
  const auto high = fr_lower(network({0.1, 0.1}, {1, 1}), vec({0.01, 0.01}), FrLowerMode::HighRate);
  EXPECT_FALSE(high.valid);
}

TEST(MutualInfo, Examples) {
  EXPECT_EQ(mutual_info_bits(1.0), 0.0);
  EXPECT_DOUBLE_EQ(mutual_info_bits(0.25), 1.0);
  EXPECT_NEAR(mutual_info_bits(0.75), 0.2075, 5e-5);
}

TEST(MutualInfo, DomainErrors) {
  for (double d : {0.0, -0.1, 1.5, std::nan("")}) {
    try {
      mutual_info_bits(d);
      FAIL() << d;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::DomainError);
    }
  }
}

TEST(Evaluate, DelegatesToBounds) {
  const NetworkParams net = ones(1);
  const auto sr = MetricSpec::make(Objective::SR, Bound::Upper, PowerMode::Fixed);
  EXPECT_NEAR(evaluate(sr, net, PowerAllocation(vec({1}), net.r)).distortion, 0.75, 1e-15);

  const NetworkParams pair = ones(2);
  const auto fr = MetricSpec::make(Objective::FR, Bound::Upper, PowerMode::Fixed);
  EXPECT_DOUBLE_EQ(evaluate(fr, pair, PowerAllocation(vec({0, 0}), pair.r)).distortion, 4.0);

  const auto opt = MetricSpec::make(Objective::SR, Bound::Lower, PowerMode::Optimized);
  EXPECT_NEAR(evaluate(opt, net, PowerBudget{1.0}).distortion, 0.75, 1e-12);
}

TEST(Evaluate, RejectsMismatchedPowerInput) {
  const auto opt = MetricSpec::make(Objective::SR, Bound::Lower, PowerMode::Optimized);
  EXPECT_THROW(evaluate(opt, ones(1), PowerAllocation(vec({1}), vec({1}))), Error);
  const auto fixed = MetricSpec::make(Objective::SR, Bound::Lower, PowerMode::Fixed);
  EXPECT_THROW(evaluate(fixed, ones(1), PowerBudget{1.0}), Error);
}

TEST(MetricSpec, NamesRoundTrip) {
  for (const auto& spec : all_metric_specs()) EXPECT_EQ(MetricSpec::parse(spec.name()), spec);
  const auto high = MetricSpec::parse("fr-lower-opt-highrate");
  EXPECT_EQ(high.lower_mode(), FrLowerMode::HighRate);
  EXPECT_EQ(MetricSpec::parse(high.name()), high);
  EXPECT_THROW(MetricSpec::parse("sr-upper-fixed-exact"), Error);
  EXPECT_THROW(MetricSpec::parse("bogus"), Error);
}

// Random instances shared by the property tests below.
struct Instance {
  NetworkParams net;
  Eigen::VectorXd p;
};

static Instance draw_instance(Rng& rng) {
  const Eigen::Index m = 1 + static_cast<Eigen::Index>(rng.uniform() * 5);
  Instance in{NetworkParams::unit_weights(Eigen::VectorXd(m), Eigen::VectorXd(m)), Eigen::VectorXd(m)};
  for (Eigen::Index i = 0; i < m; ++i) {
    in.net.alpha(i) = rng.uniform_left();
    in.net.beta(i) = rng.uniform_left();
    in.p(i) = 10.0 * rng.uniform_left();
  }
  return in;
}

TEST(Properties, BoundsStayBetweenFloorAndPrior) {
  Rng rng(21);
  for (int t = 0; t < 2000; ++t) {
    const Instance in = draw_instance(rng);
    const double floor = 1.0 / (1.0 + in.net.beta.squaredNorm());
    for (double v : {sr_upper(in.net, in.p).distortion, sr_lower(in.net, in.p).distortion}) {
      EXPECT_GE(v, floor - 1e-15);
      EXPECT_LE(v, 1.0 + 1e-15);
    }
    EXPECT_LE(fr_lower(in.net, in.p).distortion, fr_upper(in.net, in.p).distortion * (1.0 + 1e-12));
  }
}

TEST(Properties, LowerBoundsNonIncreasingInEachPower) {
  Rng rng(22);
  for (int t = 0; t < 2000; ++t) {
    const Instance in = draw_instance(rng);
    Eigen::VectorXd more = in.p;
    const auto k = static_cast<Eigen::Index>(rng.uniform() * static_cast<double>(in.p.size()));
    more(k) += 5.0 * rng.uniform_left();
    EXPECT_LE(sr_lower(in.net, more).distortion, sr_lower(in.net, in.p).distortion + 1e-15);
    EXPECT_LE(fr_lower(in.net, more).distortion, fr_lower(in.net, in.p).distortion * (1.0 + 1e-14));
  }
}

TEST(Properties, UpperBoundsCanIncreaseWithPower) {
  // A weak sensing channel next to a strong one: more power on the weak
  // sensor adds mostly its own noise, so the AF error grows.
  const NetworkParams net = network({1.0, 1.0}, {3.0, 0.05});
  const Eigen::VectorXd base = vec({10.0, 0.1});
  const Eigen::VectorXd more = vec({10.0, 10.0});
  EXPECT_GT(sr_upper(net, more).distortion, sr_upper(net, base).distortion);
  EXPECT_GT(fr_upper(net, more).distortion, fr_upper(net, base).distortion);
}

TEST(Properties, ScalarTypeIsGeneric) {
  const NetworkParamsT<long double> net = ones(2).cast<long double>();
  const Vector<long double> p = Vector<long double>::Ones(2);
  EXPECT_NEAR(static_cast<double>(sr_upper(net, p).distortion), 0.5, 1e-18);
  EXPECT_NEAR(static_cast<double>(fr_lower(net, p).distortion), static_cast<double>(fr_lower(ones(2), vec({1, 1})).distortion), 1e-15);
}

TEST(MonteCarlo, SingleUnitSensor) {
  const McResult mc = mc_af_mse(ones(1), vec({1}), {1000000, 3});
  EXPECT_NEAR(mc.sr_mse, 0.75, 3.0 * mc.sr_se);
  EXPECT_NEAR(mc.fr_mse(0), 1.0, 3.0 * mc.fr_se(0));
}

TEST(MonteCarlo, SymmetricPair) {
  const McResult mc = mc_af_mse(ones(2), vec({1, 1}), {1000000, 4});
  EXPECT_NEAR(mc.sr_mse, 0.5, 3.0 * mc.sr_se);
}

TEST(MonteCarlo, ZeroPowerGivesPriors) {
  const NetworkParams net = network({0.5, 1.0}, {0.5, 2.0});
  const McResult mc = mc_af_mse(net, vec({0, 0}), {200000, 5});
  EXPECT_NEAR(mc.sr_mse, 1.0, 3.0 * mc.sr_se);
  EXPECT_NEAR(mc.fr_mse(0), 1.25, 3.0 * mc.fr_se(0));
  EXPECT_NEAR(mc.fr_mse(1), 5.0, 3.0 * mc.fr_se(1));
}

TEST(FrLower, DiagonalWeightsAreNotABoundForUnequalGamma) {
  // Rotating diag(gamma) into the eigenbasis of R_U and keeping only its
  // diagonal is exact for equal weights. For unequal weights it can exceed
  // an achievable distortion.
  NetworkParams net = network({1, 1}, {2, 1});
  net.gamma = vec({1, 8});
  const Eigen::VectorXd p = vec({1, 1});
  const double upper = fr_upper(net, p).distortion;
  EXPECT_GT(fr_lower(net, p).distortion, upper);

  // Water-filling over the spectrum of Gamma^1/2 R_U Gamma^1/2 stays below it.
  const Eigen::MatrixXd ru = Eigen::MatrixXd::Identity(2, 2) + net.beta * net.beta.transpose();
  const Eigen::VectorXd g = net.gamma.cwiseSqrt();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(g.asDiagonal() * ru * g.asDiagonal());
  const EigenStructure weighted{solver.eigenvalues(), Eigen::MatrixXd::Identity(2, 2), Eigen::VectorXd::Ones(2)};
  EXPECT_LE(vector_rd_exact(weighted, mac_rate_bits(net, p)), upper);
}
