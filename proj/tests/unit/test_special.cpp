#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>

#include "crcs/special.hpp"

namespace crcs {
namespace {

// Independent oracle: adaptive Gauss-Kronrod quadrature of the gamma density
// after u = v^2, which removes the endpoint singularity for shape < 1.
double density(double u, double shape, double scale) {
  if (u <= 0.0) return 0.0;
  return std::exp((shape - 1.0) * std::log(u) - u / scale - std::lgamma(shape) - shape * std::log(scale));
}

double cdf_by_quadrature(double x, double shape, double scale) {
  using boost::math::quadrature::gauss_kronrod;
  return gauss_kronrod<double, 61>::integrate([&](double v) { return 2.0 * v * density(v * v, shape, scale); }, 0.0,
                                              std::sqrt(x), 15, 1e-14);
}

TEST(Special, GammaCdfMatchesQuadrature) {
  const double shapes[][2] = {{5.0, 3.0}, {9.0, 2.0}, {1.0, 1.0}, {0.5, 2.0}, {20.0, 0.5}};
  for (const auto& p : shapes) {
    for (double x : {0.1, 1.0, 5.0, 10.0, 15.0, 20.0, 30.0, 35.0, 60.0}) {
      EXPECT_NEAR(gamma_cdf(x, p[0], p[1]), cdf_by_quadrature(x, p[0], p[1]), 1e-10)
          << "shape " << p[0] << " scale " << p[1] << " x " << x;
    }
  }
}

TEST(Special, ClosedForms) {
  for (double x : {0.0, 0.3, 2.0, 7.5}) {
    EXPECT_NEAR(gamma_p(1.0, x), 1.0 - std::exp(-x), 1e-14);
    EXPECT_NEAR(gamma_p(2.0, x), 1.0 - (1.0 + x) * std::exp(-x), 1e-14);
    EXPECT_NEAR(gamma_p(0.5, x), std::erf(std::sqrt(x)), 1e-14);
  }
  EXPECT_EQ(gamma_cdf(-1.0, 5.0, 3.0), 0.0);
  EXPECT_NEAR(gamma_cdf(1e6, 5.0, 3.0), 1.0, 1e-15);
}

TEST(Special, CdfIntegralMatchesQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  for (double x : {1.0, 10.0, 20.0, 35.0}) {
    const double q = gauss_kronrod<double, 61>::integrate(
        [](double u) { return cdf_by_quadrature(u, 5.0, 3.0); }, 0.0, x, 10, 1e-13);
    EXPECT_NEAR(gamma_cdf_integral(x, 5.0, 3.0), q, 1e-9 * (1.0 + x));
  }
}

}  // namespace
}  // namespace crcs
