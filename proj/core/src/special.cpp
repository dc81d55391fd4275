#include "crcs/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace crcs {
namespace {

constexpr int kMaxTerms = 1000;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;

double lower_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxTerms; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper tail Q(a, x) by the modified Lentz continued fraction.
double upper_fraction(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxTerms; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double gamma_p(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("gamma_p: shape must be positive");
  if (std::isnan(x)) return std::numeric_limits<double>::quiet_NaN();
  if (x <= 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return lower_series(a, x);
  return 1.0 - upper_fraction(a, x);
}

double gamma_cdf(double x, double shape, double scale) {
  if (!(scale > 0.0)) throw std::invalid_argument("gamma_cdf: scale must be positive");
  return gamma_p(shape, x / scale);
}

double gamma_cdf_integral(double x, double shape, double scale) {
  if (x <= 0.0) return 0.0;
  const double u = x / scale;
  // int_0^x P(a, v/s) dv = x P(a, x/s) - a s P(a+1, x/s)
  return x * gamma_p(shape, u) - shape * scale * gamma_p(shape + 1.0, u);
}

}  // namespace crcs
