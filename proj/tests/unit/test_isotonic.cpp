#include <gtest/gtest.h>

#include <random>

#include "crcs/isotonic.hpp"
#include "crcs_oracle/oracle.hpp"

namespace crcs {
namespace {

TEST(Isotonic, MonotoneInputUnchanged) {
  const std::vector<double> y{0.1, 0.2, 0.2, 0.7};
  const std::vector<double> w{1, 2, 3, 4};
  EXPECT_EQ(isotonic_regression(y, w), y);
}

TEST(Isotonic, PoolsViolators) {
  const std::vector<double> num{1, 0, 1};
  const std::vector<double> den{1, 1, 1};
  EXPECT_EQ(isotonic_ratio(num, den), (std::vector<double>{0.5, 0.5, 1.0}));
}

TEST(Isotonic, ZeroWeightInheritsPredecessor) {
  const std::vector<double> num{0, 1, 0, 3};
  const std::vector<double> den{0, 2, 0, 4};
  EXPECT_EQ(isotonic_ratio(num, den), (std::vector<double>{0.0, 0.5, 0.5, 0.75}));
}

TEST(Isotonic, AllZeroEvents) {
  const std::vector<double> num{0, 0, 0};
  const std::vector<double> den{3, 1, 2};
  EXPECT_EQ(isotonic_ratio(num, den), (std::vector<double>{0, 0, 0}));
}

TEST(Isotonic, SizeMismatch) {
  const std::vector<double> a{1, 2};
  const std::vector<double> b{1};
  EXPECT_THROW(isotonic_regression(a, b), std::invalid_argument);
}

TEST(Isotonic, MatchesGcmOracle) {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 300; ++rep) {
    const std::size_t m = 1 + rng() % 15;
    std::vector<double> num(m), den(m);
    std::vector<std::pair<double, double>> diagram{{0.0, 0.0}};
    for (std::size_t i = 0; i < m; ++i) {
      den[i] = static_cast<double>(1 + rng() % 6);
      num[i] = static_cast<double>(rng() % (static_cast<unsigned>(den[i]) + 1));
      diagram.emplace_back(diagram.back().first + den[i], diagram.back().second + num[i]);
    }
    const auto fit = isotonic_ratio(num, den);
    const auto slopes = oracle::gcm_slopes(diagram);
    ASSERT_EQ(slopes.size(), m);
    for (std::size_t i = 0; i < m; ++i) EXPECT_NEAR(fit[i], slopes[i], 1e-12);
    for (std::size_t i = 1; i < m; ++i) EXPECT_LE(fit[i - 1], fit[i]);
  }
}

}  // namespace
}  // namespace crcs
