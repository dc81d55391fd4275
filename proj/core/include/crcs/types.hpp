#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace crcs {

// Status 0 means "no event by the inspection time"; status k >= 1 means the
// event happened with cause k. Internally causes are 0-based and the
// censored category sits at index K.
struct Observation {
  double time = 0.0;
  int status = 0;

  friend bool operator==(const Observation&, const Observation&) = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Closure { kOpenOpen, kOpenClosed, kClosedOpen, kClosedClosed };

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  Closure closure = Closure::kOpenClosed;

  bool contains(double x) const;
  bool lower_closed() const {
    return closure == Closure::kClosedOpen || closure == Closure::kClosedClosed;
  }
  bool upper_closed() const {
    return closure == Closure::kOpenClosed || closure == Closure::kClosedClosed;
  }
};

std::string_view to_string(Closure c);
Closure parse_closure(std::string_view s);

// Ordered disjoint intervals, each with one representative point inside it.
class GroupingScheme {
 public:
  GroupingScheme() = default;
  GroupingScheme(std::vector<Interval> intervals, std::vector<double> representatives);

  // Contiguous cells (lo, lo+w], (lo+w, lo+2w], ... up to hi, represented by
  // their midpoints.
  static GroupingScheme uniform_cells(double lo, double hi, double width,
                                      Closure closure = Closure::kOpenClosed);

  const std::vector<Interval>& intervals() const { return intervals_; }
  const std::vector<double>& representatives() const { return representatives_; }
  std::size_t size() const { return intervals_.size(); }

  // Index of the interval containing x, or -1.
  std::ptrdiff_t locate(double x) const;

 private:
  std::vector<Interval> intervals_;
  std::vector<double> representatives_;
};

// Sufficient statistic: per support point, counts for each cause plus the
// censored count in column K.
class TallyTable {
 public:
  TallyTable() = default;
  TallyTable(std::vector<double> support, std::vector<std::int64_t> counts, int causes);

  int causes() const { return causes_; }
  std::size_t size() const { return support_.size(); }
  std::int64_t n() const { return n_; }
  const std::vector<double>& support() const { return support_; }

  // k in [0, K]; k == K is the censored count.
  std::int64_t count(std::size_t i, int k) const {
    return counts_[i * static_cast<std::size_t>(causes_ + 1) + static_cast<std::size_t>(k)];
  }
  std::int64_t censored(std::size_t i) const { return count(i, causes_); }
  std::int64_t total(std::size_t i) const { return totals_[i]; }
  double fraction(std::size_t i) const {
    return static_cast<double>(totals_[i]) / static_cast<double>(n_);
  }

  // Index of an exact support value, or -1.
  std::ptrdiff_t find(double point) const;
  // Largest support index with support <= point, or -1.
  std::ptrdiff_t floor_index(double point) const;

  friend bool operator==(const TallyTable&, const TallyTable&) = default;

 private:
  std::vector<double> support_;
  std::vector<std::int64_t> counts_;
  std::vector<std::int64_t> totals_;
  std::int64_t n_ = 0;
  int causes_ = 1;
};

enum class EstimatorKind { kMle, kNaive, kSimple };
enum class ObservationModel { kDiscrete, kGrouped, kSmooth };

std::string_view to_string(EstimatorKind kind);
std::string_view to_string(ObservationModel model);
EstimatorKind parse_estimator_kind(std::string_view s);
ObservationModel parse_observation_model(std::string_view s);

// Values of a K-vector of functions at the support points; row i is the
// support point, column k the cause.
struct StepEstimate {
  std::vector<double> support;
  Eigen::MatrixXd values;
  EstimatorKind kind = EstimatorKind::kMle;
  ObservationModel model = ObservationModel::kDiscrete;

  int causes() const { return static_cast<int>(values.cols()); }
  // Step-function value: the value at the largest support point <= t, 0 if
  // t lies left of the support.
  double value_at(double t, int k) const;
};

}  // namespace crcs
