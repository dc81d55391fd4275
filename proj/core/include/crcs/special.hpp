#pragma once

namespace crcs {

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
// Series for x < a + 1, Lentz continued fraction otherwise.
double gamma_p(double a, double x);

// CDF of the gamma law with the given shape and scale.
double gamma_cdf(double x, double shape, double scale);

// Integral of gamma_cdf(u; shape, scale) du over [0, x].
double gamma_cdf_integral(double x, double shape, double scale);

}  // namespace crcs
