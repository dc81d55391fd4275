#include "crcs/regularity.hpp"

namespace crcs {

RegularityFlags classify_regular(const Eigen::MatrixXd& values, SupportInfo info) {
  const auto m = values.rows();
  const auto causes = values.cols();
  RegularityFlags flags;
  flags.regular.assign(static_cast<std::size_t>(m), false);
  flags.reason.assign(static_cast<std::size_t>(m), RegularityReason::kNotRegular);

  for (Eigen::Index i = 0; i < m; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    if ((values.row(i).array() == 0.0).all()) {
      flags.regular[idx] = true;
      flags.reason[idx] = RegularityReason::kAllZero;
      continue;
    }
    const bool is_first = i == 0;
    const bool is_last = i == m - 1;
    // Without a complete support the outer neighbour of an endpoint is unknown.
    if (!info.complete && (is_first || is_last)) continue;

    bool ok = true;
    for (Eigen::Index k = 0; k < causes && ok; ++k) {
      const double v = values(i, k);
      if (v == 0.0) continue;
      if (!is_first && !(values(i - 1, k) < v)) ok = false;
      if (!is_last && !(v < values(i + 1, k))) ok = false;
    }
    if (ok) {
      flags.regular[idx] = true;
      flags.reason[idx] = (is_first || is_last) ? RegularityReason::kBoundary
                                                : RegularityReason::kStrictIncrease;
    }
  }
  return flags;
}

}  // namespace crcs
