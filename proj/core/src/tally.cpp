#include "crcs/tally.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace crcs {
namespace {

void check_statuses(std::span<const Observation> observations, int causes) {
  if (observations.empty()) throw Error("no observations");
  if (causes < 1) throw Error("K must be at least 1");
  for (const auto& o : observations) {
    if (o.status < 0 || o.status > causes) throw Error("invalid cause label");
    if (!std::isfinite(o.time)) throw Error("non-finite observation time");
  }
}

// Column of a status in the count matrix: causes 1..K -> 0..K-1, status 0 -> K.
std::size_t column(int status, int causes) {
  return status == 0 ? static_cast<std::size_t>(causes) : static_cast<std::size_t>(status - 1);
}

}  // namespace

TallyTable tally_discrete(std::span<const Observation> observations, int causes) {
  check_statuses(observations, causes);
  std::vector<Observation> sorted(observations.begin(), observations.end());
  std::sort(sorted.begin(), sorted.end(), [](const Observation& a, const Observation& b) {
    return a.time < b.time;
  });
  const auto width = static_cast<std::size_t>(causes + 1);
  std::vector<double> support;
  std::vector<std::int64_t> counts;
  for (const auto& o : sorted) {
    if (support.empty() || support.back() != o.time) {
      support.push_back(o.time);
      counts.resize(counts.size() + width, 0);
    }
    counts[(support.size() - 1) * width + column(o.status, causes)] += 1;
  }
  return TallyTable(std::move(support), std::move(counts), causes);
}

std::vector<Observation> round_to_scheme(std::span<const Observation> observations,
                                         const GroupingScheme& scheme) {
  const auto& reps = scheme.representatives();
  const bool already_rounded = std::all_of(observations.begin(), observations.end(), [&](const Observation& o) {
    return std::binary_search(reps.begin(), reps.end(), o.time);
  });
  std::vector<Observation> out(observations.begin(), observations.end());
  if (already_rounded) return out;
  for (auto& o : out) {
    const auto idx = scheme.locate(o.time);
    if (idx < 0) {
      throw Error("time not covered by grouping scheme: " + std::to_string(o.time));
    }
    o.time = reps[static_cast<std::size_t>(idx)];
  }
  return out;
}

TallyTable tally_grouped(std::span<const Observation> observations, const GroupingScheme& scheme,
                         int causes) {
  check_statuses(observations, causes);
  return tally_discrete(round_to_scheme(observations, scheme), causes);
}

int infer_causes(std::span<const Observation> observations) {
  int k = 1;
  for (const auto& o : observations) k = std::max(k, o.status);
  return k;
}

std::vector<Observation> expand(const TallyTable& tally) {
  std::vector<Observation> out;
  out.reserve(static_cast<std::size_t>(tally.n()));
  const int causes = tally.causes();
  for (std::size_t i = 0; i < tally.size(); ++i) {
    for (std::int64_t c = 0; c < tally.censored(i); ++c) out.push_back({tally.support()[i], 0});
    for (int k = 0; k < causes; ++k) {
      for (std::int64_t c = 0; c < tally.count(i, k); ++c) out.push_back({tally.support()[i], k + 1});
    }
  }
  return out;
}

}  // namespace crcs
