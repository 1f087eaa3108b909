#include <gtest/gtest.h>

#include <cmath>

#include "pdm/metrics.hpp"
#include "pdm/oracle.hpp"
#include "test_util.hpp"

using namespace pdm;
using pdm::test::network;
using pdm::test::ones;
using pdm::test::vec;

TEST(Rng, Deterministic) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    EXPECT_EQ(a.uniform(), b.uniform());
    EXPECT_EQ(a.normal(), b.normal());
  }
}

TEST(Rng, ShardsDiffer) {
  Rng a = Rng::shard(7, 0), b = Rng::shard(7, 1);
  EXPECT_NE(a.uniform(), b.uniform());
}

TEST(Rng, Ranges) {
  Rng rng(3);
  double sum = 0.0, sum_sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform_left();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
    EXPECT_GT(v, 0.0);
    EXPECT_LE(v, 1.0);
    const double z = rng.normal();
    sum += z;
    sum_sq += z * z;
  }
  EXPECT_NEAR(sum / n, 0.0, 0.01);
  EXPECT_NEAR(sum_sq / n, 1.0, 0.01);
}

TEST(MonteCarlo, SameSeedSameResult) {
  const auto a = mc_af_mse(ones(2), vec({1, 2}), {1000, 9});
  const auto b = mc_af_mse(ones(2), vec({1, 2}), {1000, 9});
  EXPECT_EQ(a.sr_mse, b.sr_mse);
  EXPECT_EQ(a.fr_mse, b.fr_mse);
}

TEST(MonteCarlo, MatchesFieldBound) {
  const NetworkParams net = network({0.8, 1.3}, {1.1, 0.6});
  const Eigen::VectorXd p = vec({2.0, 0.5});
  const McResult mc = mc_af_mse(net, p, {1000000, 12});
  const BoundValue fr = fr_upper(net, p);
  for (Eigen::Index m = 0; m < 2; ++m) EXPECT_NEAR(mc.fr_mse(m), (*fr.components)(m), 3.0 * mc.fr_se(m));
  EXPECT_NEAR(mc.sr_mse, sr_upper(net, p).distortion, 3.0 * mc.sr_se);
}

TEST(BruteForce, SymmetricIsUniform) {
  const NetworkParams net = ones(2);
  const auto best = brute_force_power([&](const Eigen::VectorXd& p) { return sr_lower(net, p).distortion; },
                                      net.r, 2.0, 1e-3);
  EXPECT_NEAR(best.allocation(0), 1.0, 2e-3);
  EXPECT_NEAR(best.allocation(1), 1.0, 2e-3);
  EXPECT_NEAR(best.value, 0.5, 1e-9);
}

TEST(BruteForce, SingleSensorTakesBudget) {
  const NetworkParams net = NetworkParams{vec({1}), vec({1}), vec({1}), vec({2})};
  const auto best = brute_force_power([&](const Eigen::VectorXd& p) { return sr_upper(net, p).distortion; },
                                      net.r, 3.0, 1e-3);
  EXPECT_EQ(best.allocation(0), 1.5);
}

TEST(BruteForce, DimensionLimit) {
  const auto flat = [](const Eigen::VectorXd&) { return 0.0; };
  try {
    brute_force_power(flat, Eigen::VectorXd::Ones(4), 1.0, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionTooLarge);
  }
  EXPECT_THROW(brute_force_waterfill(Eigen::VectorXd::Ones(4), Eigen::VectorXd::Ones(4), 1.0, 0.1), Error);
}

TEST(BruteWaterfill, Examples) {
  EXPECT_NEAR(brute_force_waterfill(vec({1, 3}), vec({1, 1}), 0.5 * std::log2(12.0), 1e-3), 1.0, 1e-3);
  EXPECT_DOUBLE_EQ(brute_force_waterfill(vec({1, 3}), vec({2, 0.5}), 0.0, 1e-3), 3.5);
  EXPECT_DOUBLE_EQ(brute_force_waterfill(vec({3}), vec({1}), 1.0, 1e-3), 0.75);
}

TEST(DecadeGrid, Points) {
  const auto g = decade_grid(-1, 1, 2);
  ASSERT_EQ(g.size(), 5u);
  EXPECT_DOUBLE_EQ(g.front(), 0.1);
  EXPECT_DOUBLE_EQ(g[2], 1.0);
  EXPECT_DOUBLE_EQ(g.back(), 10.0);
}

TEST(GapExperiment, SingleSensorHasNoGap) {
  const auto exp = matched_mismatched_experiment(1, 50, 2, PowerMode::Fixed, decade_grid(-1, 2));
  for (const BoundMeans* means : {&exp.matched, &exp.mismatched}) {
    EXPECT_LT(means->sr_gap().cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT(means->fr_gap().cwiseAbs().maxCoeff(), 1e-14);
  }
}

TEST(GapExperiment, MatchedGapSmallerForFiveSensors) {
  const auto exp = matched_mismatched_experiment(5, 2000, 1, PowerMode::Fixed, decade_grid(-1, 3));
  const Eigen::VectorXd matched = exp.matched.sr_gap();
  const Eigen::VectorXd mismatched = exp.mismatched.sr_gap();
  for (Eigen::Index k = 0; k < matched.size(); ++k) EXPECT_LT(matched(k), mismatched(k));
}

TEST(GapExperiment, Deterministic) {
  const auto a = matched_mismatched_experiment(3, 100, 8, PowerMode::Optimized, decade_grid(0, 1));
  const auto b = matched_mismatched_experiment(3, 100, 8, PowerMode::Optimized, decade_grid(0, 1));
  EXPECT_EQ(a.matched.sr_lower, b.matched.sr_lower);
  EXPECT_EQ(a.mismatched.fr_upper, b.mismatched.fr_upper);
}
