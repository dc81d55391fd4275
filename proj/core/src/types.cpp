#include "crcs/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace crcs {

bool Interval::contains(double x) const {
  const bool above = lower_closed() ? x >= lower : x > lower;
  const bool below = upper_closed() ? x <= upper : x < upper;
  return above && below;
}

std::string_view to_string(Closure c) {
  switch (c) {
    case Closure::kOpenOpen: return "oo";
    case Closure::kOpenClosed: return "oc";
    case Closure::kClosedOpen: return "co";
    case Closure::kClosedClosed: return "cc";
  }
  return "oc";
}

Closure parse_closure(std::string_view s) {
  if (s == "oo") return Closure::kOpenOpen;
  if (s == "oc") return Closure::kOpenClosed;
  if (s == "co") return Closure::kClosedOpen;
  if (s == "cc") return Closure::kClosedClosed;
  throw Error("invalid closure '" + std::string(s) + "' (expected oo, oc, co or cc)");
}

GroupingScheme::GroupingScheme(std::vector<Interval> intervals, std::vector<double> representatives)
    : intervals_(std::move(intervals)), representatives_(std::move(representatives)) {
  if (intervals_.size() != representatives_.size()) {
    throw Error("grouping scheme: one representative per interval required");
  }
  if (intervals_.empty()) throw Error("grouping scheme: no intervals");
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    const Interval& iv = intervals_[i];
    if (!std::isfinite(iv.lower) || !std::isfinite(iv.upper) || !std::isfinite(representatives_[i])) {
      throw Error("grouping scheme: non-finite bound");
    }
    if (iv.lower > iv.upper || (iv.lower == iv.upper && iv.closure != Closure::kClosedClosed)) {
      throw Error("grouping scheme: empty interval at position " + std::to_string(i + 1));
    }
    if (!iv.contains(representatives_[i])) {
      throw Error("grouping scheme: representative outside its interval at position " +
                  std::to_string(i + 1));
    }
    if (i > 0) {
      if (!(representatives_[i - 1] < representatives_[i])) {
        throw Error("grouping scheme: representatives must be strictly increasing");
      }
      const Interval& prev = intervals_[i - 1];
      const bool disjoint = prev.upper < iv.lower ||
                            (prev.upper == iv.lower && !(prev.upper_closed() && iv.lower_closed()));
      if (!disjoint) {
        throw Error("grouping scheme: intervals " + std::to_string(i) + " and " +
                    std::to_string(i + 1) + " overlap or are out of order");
      }
    }
  }
}

GroupingScheme GroupingScheme::uniform_cells(double lo, double hi, double width, Closure closure) {
  if (!(width > 0.0) || !(hi > lo)) throw Error("uniform_cells: need lo < hi and width > 0");
  const auto cells = static_cast<std::size_t>(std::llround((hi - lo) / width));
  if (cells == 0 || std::abs(lo + static_cast<double>(cells) * width - hi) > 1e-9 * (1.0 + std::abs(hi))) {
    throw Error("uniform_cells: width must divide the range");
  }
  std::vector<Interval> intervals;
  std::vector<double> reps;
  for (std::size_t c = 0; c < cells; ++c) {
    const double a = lo + static_cast<double>(c) * width;
    const double b = c + 1 == cells ? hi : lo + static_cast<double>(c + 1) * width;
    intervals.push_back({a, b, closure});
    reps.push_back(0.5 * (a + b));
  }
  return GroupingScheme(std::move(intervals), std::move(reps));
}

std::ptrdiff_t GroupingScheme::locate(double x) const {
  // Intervals are ordered and disjoint: the candidate is the last one whose
  // lower bound is <= x.
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const Interval& iv) { return v < iv.lower; });
  if (it == intervals_.begin()) return -1;
  const auto idx = std::distance(intervals_.begin(), it) - 1;
  if (intervals_[static_cast<std::size_t>(idx)].contains(x)) return idx;
  // x == lower of interval idx with an open lower end may still sit in the
  // previous interval's closed upper end.
  if (idx > 0 && intervals_[static_cast<std::size_t>(idx - 1)].contains(x)) return idx - 1;
  return -1;
}

TallyTable::TallyTable(std::vector<double> support, std::vector<std::int64_t> counts, int causes)
    : support_(std::move(support)), counts_(std::move(counts)), causes_(causes) {
  if (causes_ < 1) throw Error("tally: K must be at least 1");
  const auto width = static_cast<std::size_t>(causes_ + 1);
  if (counts_.size() != support_.size() * width) throw Error("tally: count matrix shape mismatch");
  totals_.assign(support_.size(), 0);
  for (std::size_t i = 0; i < support_.size(); ++i) {
    if (i > 0 && !(support_[i - 1] < support_[i])) {
      throw Error("tally: support must be strictly increasing");
    }
    for (std::size_t k = 0; k < width; ++k) {
      const std::int64_t c = counts_[i * width + k];
      if (c < 0) throw Error("tally: negative count");
      totals_[i] += c;
    }
    n_ += totals_[i];
  }
  if (n_ <= 0) throw Error("no observations");
}

std::ptrdiff_t TallyTable::find(double point) const {
  auto it = std::lower_bound(support_.begin(), support_.end(), point);
  if (it == support_.end() || *it != point) return -1;
  return std::distance(support_.begin(), it);
}

std::ptrdiff_t TallyTable::floor_index(double point) const {
  auto it = std::upper_bound(support_.begin(), support_.end(), point);
  return std::distance(support_.begin(), it) - 1;
}

std::string_view to_string(EstimatorKind kind) {
  switch (kind) {
    case EstimatorKind::kMle: return "mle";
    case EstimatorKind::kNaive: return "naive";
    case EstimatorKind::kSimple: return "simple";
  }
  return "mle";
}

std::string_view to_string(ObservationModel model) {
  switch (model) {
    case ObservationModel::kDiscrete: return "discrete";
    case ObservationModel::kGrouped: return "grouped";
    case ObservationModel::kSmooth: return "smooth";
  }
  return "discrete";
}

EstimatorKind parse_estimator_kind(std::string_view s) {
  if (s == "mle") return EstimatorKind::kMle;
  if (s == "naive") return EstimatorKind::kNaive;
  if (s == "simple") return EstimatorKind::kSimple;
  throw Error("unknown estimator '" + std::string(s) + "'");
}

ObservationModel parse_observation_model(std::string_view s) {
  if (s == "discrete") return ObservationModel::kDiscrete;
  if (s == "grouped") return ObservationModel::kGrouped;
  if (s == "smooth") return ObservationModel::kSmooth;
  throw Error("unknown model '" + std::string(s) + "'");
}

double StepEstimate::value_at(double t, int k) const {
  auto it = std::upper_bound(support.begin(), support.end(), t);
  if (it == support.begin()) return 0.0;
  const auto i = std::distance(support.begin(), it) - 1;
  return values(i, k);
}

}  // namespace crcs
