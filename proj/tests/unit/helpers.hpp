#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "crcs/types.hpp"

namespace crcs::testing {

// Tally on support {1, ..., points} with counts drawn from [0, max_count];
// every point gets at least one subject.
inline TallyTable random_tally(std::mt19937_64& rng, std::size_t points, int causes, int max_count) {
  std::uniform_int_distribution<int> draw(0, max_count);
  std::vector<double> support;
  std::vector<std::int64_t> counts;
  const auto width = static_cast<std::size_t>(causes + 1);
  for (std::size_t i = 0; i < points; ++i) {
    support.push_back(static_cast<double>(i + 1));
    std::int64_t total = 0;
    for (std::size_t c = 0; c < width; ++c) {
      counts.push_back(draw(rng));
      total += counts.back();
    }
    if (total == 0) counts[counts.size() - 1 - static_cast<std::size_t>(rng() % width)] = 1;
  }
  return TallyTable(std::move(support), std::move(counts), causes);
}

inline TallyTable make_tally(std::vector<double> support, std::vector<std::int64_t> counts, int causes) {
  return TallyTable(std::move(support), std::move(counts), causes);
}

}  // namespace crcs::testing
