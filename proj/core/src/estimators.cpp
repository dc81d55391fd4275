#include "crcs/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "crcs/isotonic.hpp"

namespace crcs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogy(std::int64_t count, double value) {
  if (count == 0) return 0.0;
  if (!(value > 0.0)) return -kInf;
  return static_cast<double>(count) * std::log(value);
}

void check_cause(const TallyTable& tally, int k) {
  if (k < 0 || k >= tally.causes()) throw Error("cause index out of range");
}

void check_shape(const TallyTable& tally, const Eigen::MatrixXd& values) {
  if (values.rows() != static_cast<Eigen::Index>(tally.size()) || values.cols() != tally.causes()) {
    throw Error("candidate shape does not match the tally");
  }
}

}  // namespace

void SolverSettings::validate() const {
  if (max_outer_iterations < 1) throw Error("max_outer_iterations must be positive");
  if (!(likelihood_tolerance > 0.0) || !(kkt_tolerance > 0.0) || !(floor_epsilon > 0.0)) {
    throw Error("solver tolerances must be positive");
  }
  if (!(contraction > 0.0 && contraction < 1.0)) throw Error("contraction must lie in (0,1)");
}

NonConvergence::NonConvergence(const std::string& what, MleResult last)
    : Error(what), last_(std::move(last)) {}

double log_likelihood(const TallyTable& tally, const Eigen::MatrixXd& values) {
  check_shape(tally, values);
  const int causes = tally.causes();
  double total = 0.0;
  for (std::size_t i = 0; i < tally.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    double sum = 0.0;
    for (int k = 0; k < causes; ++k) {
      const double v = values(row, k);
      sum += v;
      total += xlogy(tally.count(i, k), v);
    }
    total += xlogy(tally.censored(i), 1.0 - sum);
  }
  return total;
}

double marginal_log_likelihood(const TallyTable& tally, int k, const std::vector<double>& x) {
  check_cause(tally, k);
  if (x.size() != tally.size()) throw Error("candidate size does not match the tally");
  double total = 0.0;
  for (std::size_t i = 0; i < tally.size(); ++i) {
    const std::int64_t events = tally.count(i, k);
    total += xlogy(events, x[i]) + xlogy(tally.total(i) - events, 1.0 - x[i]);
  }
  return total;
}

StepEstimate simple_estimator(const TallyTable& tally) {
  StepEstimate est;
  est.support = tally.support();
  est.kind = EstimatorKind::kSimple;
  est.values = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(tally.size()), tally.causes());
  for (std::size_t i = 0; i < tally.size(); ++i) {
    const std::int64_t total = tally.total(i);
    if (total == 0) continue;
    for (int k = 0; k < tally.causes(); ++k) {
      est.values(static_cast<Eigen::Index>(i), k) =
          static_cast<double>(tally.count(i, k)) / static_cast<double>(total);
    }
  }
  return est;
}

std::vector<double> naive_estimator(const TallyTable& tally, int k) {
  check_cause(tally, k);
  std::vector<double> events(tally.size());
  std::vector<double> totals(tally.size());
  for (std::size_t i = 0; i < tally.size(); ++i) {
    events[i] = static_cast<double>(tally.count(i, k));
    totals[i] = static_cast<double>(tally.total(i));
  }
  return isotonic_ratio(events, totals);
}

StepEstimate naive_estimate(const TallyTable& tally) {
  StepEstimate est;
  est.support = tally.support();
  est.kind = EstimatorKind::kNaive;
  est.values.resize(static_cast<Eigen::Index>(tally.size()), tally.causes());
  for (int k = 0; k < tally.causes(); ++k) {
    const auto column = naive_estimator(tally, k);
    for (std::size_t i = 0; i < column.size(); ++i) est.values(static_cast<Eigen::Index>(i), k) = column[i];
  }
  return est;
}

std::vector<double> constrained_naive(const TallyTable& tally, int k, double t0, double theta) {
  check_cause(tally, k);
  if (!(theta >= 0.0 && theta <= 1.0)) throw Error("theta must lie in [0,1]");
  const auto& support = tally.support();
  const std::size_t m = support.size();
  // [0, left_end) strictly left of t0, [right_begin, m) strictly right.
  const auto left_end = static_cast<std::size_t>(
      std::lower_bound(support.begin(), support.end(), t0) - support.begin());
  const auto right_begin = static_cast<std::size_t>(
      std::upper_bound(support.begin(), support.end(), t0) - support.begin());

  std::vector<double> events(m), totals(m);
  for (std::size_t i = 0; i < m; ++i) {
    events[i] = static_cast<double>(tally.count(i, k));
    totals[i] = static_cast<double>(tally.total(i));
  }
  std::vector<double> out(m, theta);
  const auto left = isotonic_ratio(std::span(events).first(left_end), std::span(totals).first(left_end));
  for (std::size_t i = 0; i < left_end; ++i) out[i] = std::min(left[i], theta);
  const auto right = isotonic_ratio(std::span(events).subspan(right_begin),
                                    std::span(totals).subspan(right_begin));
  for (std::size_t i = right_begin; i < m; ++i) {
    // A leading zero-total point on the right inherits theta, not 0.
    const double v = right[i - right_begin];
    out[i] = std::max(v, theta);
  }
  return out;
}

double kkt_residual(const TallyTable& tally, const Eigen::MatrixXd& values) {
  check_shape(tally, values);
  const int causes = tally.causes();
  const std::size_t m = tally.size();
  const double n = static_cast<double>(tally.n());

  double residual = 0.0;
  // Feasibility.
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    double sum = 0.0;
    for (int k = 0; k < causes; ++k) {
      const double v = values(r, k);
      if (!std::isfinite(v)) return kInf;
      residual = std::max(residual, -v);
      if (i > 0) residual = std::max(residual, values(r - 1, k) - v);
      sum += v;
    }
    residual = std::max(residual, sum - 1.0);
  }

  // Per-point gradients of the normalised likelihood.
  Eigen::MatrixXd grad(static_cast<Eigen::Index>(m), causes);
  for (std::size_t i = 0; i < m; ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    const double survival = 1.0 - values.row(r).sum();
    const std::int64_t b = tally.censored(i);
    double censored_term = 0.0;
    if (b > 0) {
      if (!(survival > 0.0)) return kInf;
      censored_term = static_cast<double>(b) / n / survival;
    }
    for (int k = 0; k < causes; ++k) {
      const std::int64_t a = tally.count(i, k);
      double event_term = 0.0;
      if (a > 0) {
        if (!(values(r, k) > 0.0)) return kInf;
        event_term = static_cast<double>(a) / n / values(r, k);
      }
      grad(r, k) = event_term - censored_term;
    }
  }

  // Suffix sums G_k(j) are the derivatives with respect to the jump of F_k at j.
  Eigen::MatrixXd suffix(static_cast<Eigen::Index>(m), causes);
  double max_suffix = -kInf;
  for (int k = 0; k < causes; ++k) {
    double acc = 0.0;
    for (std::size_t j = m; j-- > 0;) {
      acc += grad(static_cast<Eigen::Index>(j), k);
      suffix(static_cast<Eigen::Index>(j), k) = acc;
      max_suffix = std::max(max_suffix, acc);
    }
  }

  const double last_survival = m > 0 ? 1.0 - values.row(static_cast<Eigen::Index>(m - 1)).sum() : 1.0;
  const bool sum_active = last_survival <= 1e-12;
  const double mu = sum_active ? std::max(0.0, max_suffix) : 0.0;

  for (int k = 0; k < causes; ++k) {
    double previous = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
      const auto r = static_cast<Eigen::Index>(j);
      const double g = suffix(r, k) - mu;
      residual = std::max(residual, g);
      if (values(r, k) > previous) residual = std::max(residual, std::abs(g));
      previous = values(r, k);
    }
  }
  return residual;
}

StepEstimate estimate(const TallyTable& tally, EstimatorKind kind, ObservationModel model,
                      const SolverSettings& settings) {
  StepEstimate est;
  switch (kind) {
    case EstimatorKind::kMle: est = mle(tally, settings).estimate; break;
    case EstimatorKind::kNaive: est = naive_estimate(tally); break;
    case EstimatorKind::kSimple: est = simple_estimator(tally); break;
  }
  est.model = model;
  return est;
}

}  // namespace crcs
