#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "crcs/types.hpp"

namespace crcs {

struct SolverSettings {
  int max_outer_iterations = 10000;
  double likelihood_tolerance = 1e-12;  // relative improvement
  double kkt_tolerance = 1e-8;
  double contraction = 0.5;             // backtracking factor in (0,1)
  double floor_epsilon = 1e-14;         // log-argument floor while iterating

  void validate() const;
};

// sum_s sum_k count_k(s) log value_k(s) with value_{K+1} = 1 - sum_k value_k
// and 0 log 0 = 0, on raw counts. Returns -inf when a positive count meets a
// nonpositive value.
double log_likelihood(const TallyTable& tally, const Eigen::MatrixXd& values);

// Binomial log likelihood of the reduced data (event k vs. not) at values x.
double marginal_log_likelihood(const TallyTable& tally, int k, const std::vector<double>& x);

// count_k(s) / total(s), zero where total(s) == 0.
StepEstimate simple_estimator(const TallyTable& tally);

// Monotone maximiser of the marginal binomial likelihood of cause k
// (0-based), i.e. the left slopes of the greatest convex minorant of the
// cumulative sum diagram.
std::vector<double> naive_estimator(const TallyTable& tally, int k);
StepEstimate naive_estimate(const TallyTable& tally);

// Marginal maximiser with the value pinned to theta at time t0. Points at or
// left of t0 are clipped above at theta, points right of it below at theta;
// a support point equal to t0 takes theta itself.
std::vector<double> constrained_naive(const TallyTable& tally, int k, double t0, double theta);

// Maximum violation of the first-order optimality conditions of the MLE
// program at `values`, in units of the normalised (1/n) likelihood. For each
// cause the suffix sums G_k(j) of the per-point gradients
// count_k/F_k - count_{K+1}/(1 - F_+) must not exceed the multiplier mu of
// the constraint F_+ <= 1 and must equal it wherever F_k jumps; mu is zero
// unless the constraint is active at the last point.
double kkt_residual(const TallyTable& tally, const Eigen::MatrixXd& values);

struct MleResult {
  StepEstimate estimate;
  int iterations = 0;
  double log_likelihood = 0.0;  // raw-count scale
  double kkt_residual = 0.0;
  std::vector<double> likelihood_trace;  // one entry per accepted iterate
};

class NonConvergence : public Error {
 public:
  NonConvergence(const std::string& what, MleResult last);
  const MleResult& last() const { return last_; }

 private:
  MleResult last_;
};

// Nonparametric MLE over K-tuples of nondecreasing functions with
// F_+ <= 1 on the support. Throws NonConvergence if the certificate is not
// reached within the iteration budget.
MleResult mle(const TallyTable& tally, const SolverSettings& settings = {});

// Dispatches on kind; model is copied into the result.
StepEstimate estimate(const TallyTable& tally, EstimatorKind kind, ObservationModel model,
                      const SolverSettings& settings = {});

}  // namespace crcs
