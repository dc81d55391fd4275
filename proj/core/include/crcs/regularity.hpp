#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace crcs {

enum class RegularityReason : std::uint8_t {
  kNotRegular,
  kAllZero,         // every component is zero at the point
  kStrictIncrease,  // strict increase from both neighbours (or zero)
  kBoundary,        // first/last point of a complete support
};

struct RegularityFlags {
  std::vector<bool> regular;
  std::vector<RegularityReason> reason;
};

struct SupportInfo {
  // True when the support points are the whole support of the observation
  // law, so the first and last points are its infimum and supremum. When
  // false an endpoint has an unknown outer neighbour.
  bool complete = true;
};

// values: rows are support points in increasing order, columns are causes.
// Only the order of the support matters, not its coordinates.
RegularityFlags classify_regular(const Eigen::MatrixXd& values, SupportInfo info = {});

}  // namespace crcs
