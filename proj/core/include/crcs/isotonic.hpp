#pragma once

#include <span>
#include <vector>

namespace crcs {

// Weighted least-squares isotonic (nondecreasing) regression by pool
// adjacent violators. Adjacent blocks with equal means are pooled. Entries
// with zero weight take the value of the nearest preceding positive-weight
// entry (0 when there is none). The same fit maximises the binomial
// likelihood sum y*w*log(x) + (1-y)*w*log(1-x) over nondecreasing x.
std::vector<double> isotonic_regression(std::span<const double> y, std::span<const double> w);

// Isotonic regression of ratios num/den with weights den.
std::vector<double> isotonic_ratio(std::span<const double> num, std::span<const double> den);

}  // namespace crcs
