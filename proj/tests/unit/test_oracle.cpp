#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "crcs/estimators.hpp"
#include "crcs_oracle/oracle.hpp"
#include "helpers.hpp"

namespace crcs {
namespace {

using testing::make_tally;

TEST(Oracle, SinglePointBinomial) {
  const auto r = oracle::brute_force_mle(make_tally({1}, {3, 1}, 1), 0.01);
  EXPECT_NEAR(r.argmax(0, 0), 0.75, 1e-12);
  EXPECT_NEAR(r.optimum, 3 * std::log(0.75) + std::log(0.25), 1e-12);
  EXPECT_EQ(r.grid_step, 0.01);
}

TEST(Oracle, MonotoneSimpleEstimatorIsTheArgmax) {
  const TallyTable t = make_tally({1, 2}, {1, 1, 2, 2, 1, 1}, 2);
  const auto r = oracle::brute_force_mle(t, 0.01);
  const StepEstimate s = simple_estimator(t);
  EXPECT_LE((r.argmax - s.values).cwiseAbs().maxCoeff(), 0.01);
}

TEST(Oracle, ExhaustiveOverTheLattice) {
  // Independent enumeration on a coarse lattice for one point, K = 2.
  const TallyTable t = make_tally({1}, {2, 1, 3}, 2);
  const double step = 0.05;
  double best = -INFINITY;
  int feasible = 0;
  for (int a = 0; a <= 20; ++a) {
    for (int b = 0; a + b <= 20; ++b) {
      Eigen::MatrixXd v(1, 2);
      v << a * step, b * step;
      best = std::max(best, log_likelihood(t, v));
      ++feasible;
    }
  }
  EXPECT_EQ(feasible, 231);
  EXPECT_NEAR(oracle::brute_force_mle(t, step).optimum, best, 1e-12);
}

TEST(Oracle, Limits) {
  EXPECT_THROW(oracle::brute_force_mle(make_tally({1, 2, 3, 4}, {1, 1, 1, 1, 1, 1, 1, 1}, 1), 0.01), Error);
  EXPECT_THROW(oracle::brute_force_mle(make_tally({1}, {1, 1, 1, 1}, 3), 0.01), Error);
  EXPECT_THROW(oracle::brute_force_mle(make_tally({1}, {1, 1}, 1), 0.2), Error);
  EXPECT_THROW(oracle::brute_force_mle(make_tally({1}, {1, 1}, 1), 0.0), Error);
}

TEST(Oracle, GcmExamples) {
  using P = std::pair<double, double>;
  const std::vector<P> convex{{0, 0}, {1, 0}, {2, 1}, {4, 4}};
  EXPECT_EQ(oracle::gcm_slopes(convex), (std::vector<double>{0.0, 1.0, 1.5}));
  const std::vector<P> pooled{{0, 0}, {1, 1}, {2, 1}, {3, 2}};
  const auto s = oracle::gcm_slopes(pooled);
  ASSERT_EQ(s.size(), 3u);
  EXPECT_DOUBLE_EQ(s[0], 0.5);
  EXPECT_DOUBLE_EQ(s[1], 0.5);
  EXPECT_DOUBLE_EQ(s[2], 1.0);
  const std::vector<P> flat{{0, 0}, {2, 0}, {3, 0}};
  EXPECT_EQ(oracle::gcm_slopes(flat), (std::vector<double>{0.0, 0.0}));
}

TEST(Oracle, GcmSlopesNondecreasing) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<std::pair<double, double>> d{{0.0, 0.0}};
    const int m = 1 + static_cast<int>(rng() % 12);
    for (int i = 0; i < m; ++i) d.emplace_back(d.back().first + 0.1 + (u(rng) + 1.0), d.back().second + u(rng));
    const auto s = oracle::gcm_slopes(d);
    for (std::size_t i = 1; i < s.size(); ++i) EXPECT_LE(s[i - 1], s[i] + 1e-12);
  }
}

TEST(Oracle, KktAtFineOracleOptimum) {
  const TallyTable t = make_tally({1, 2}, {1, 1, 2, 2, 1, 1}, 2);
  const auto r = oracle::brute_force_mle(t, 1e-4);
  EXPECT_LE(kkt_residual(t, r.argmax), 1e-6);
}

}  // namespace
}  // namespace crcs
