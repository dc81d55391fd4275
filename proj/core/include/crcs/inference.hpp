#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "crcs/estimators.hpp"
#include "crcs/types.hpp"

namespace crcs {

struct CovarianceBlock {
  double point = 0.0;
  Eigen::MatrixXd matrix;  // K x K, asymptotic covariance of sqrt(n)(F_hat - F)
};

enum class CiMethod { kNormal, kBootstrap, kLikelihoodRatio };
std::string_view to_string(CiMethod m);
CiMethod parse_ci_method(std::string_view s);

struct ConfidenceInterval {
  double point = 0.0;
  int cause = 0;  // 0-based
  double level = 0.95;
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  CiMethod method = CiMethod::kNormal;
  int resamples = 0;            // bootstrap only
  double critical_value = 0.0;  // z for normal, q* for bootstrap, c for LR

  double width() const { return upper - lower; }
  bool contains(double x) const { return lower <= x && x <= upper; }
};

// Plug-in [F_k 1{k=l} - F_k F_l] / N(s) with N(s) = total(s)/n. Rows and
// columns of causes with F_k in {0,1} are exactly zero. Positive
// semidefinite whenever sum_k F_k(s) <= 1.
CovarianceBlock covariance_plugin(const TallyTable& tally, const StepEstimate& estimate,
                                  double point);

// Standard normal quantile.
double normal_quantile(double p);

struct NormalCiOptions {
  bool clip = false;
};

// F_k(s) +- n^{-1/2} z_{1-alpha/2} sqrt(V_kk).
ConfidenceInterval ci_normal(const TallyTable& tally, const StepEstimate& estimate, double point,
                             int k, double level, NormalCiOptions options = {});

// Seed for stream `index` derived from a master seed.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

struct BootstrapSpec {
  EstimatorKind estimator = EstimatorKind::kMle;
  int resamples = 200;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: default_thread_count()
  SolverSettings settings{};
};

// Estimator values of every resample at every requested (point, cause):
// result[b][p * K + k]. Resampling is over the subjects of `tally`, so the
// result does not depend on input order; evaluation at a point missing from
// a resample uses the largest support point <= point.
std::vector<std::vector<double>> bootstrap_replicates(const TallyTable& tally,
                                                      std::span<const double> points,
                                                      const BootstrapSpec& spec);

// Symmetric interval theta_hat +- q*, q* the ceil(B*level)-th smallest
// |theta*_b - theta_hat|.
ConfidenceInterval bootstrap_interval(double point, int k, double theta_hat,
                                      std::span<const double> replicates, double level,
                                      NormalCiOptions options = {});

struct BootstrapModel {
  ObservationModel model = ObservationModel::kDiscrete;
  std::optional<GroupingScheme> scheme;  // grouped model only
};

ConfidenceInterval ci_bootstrap(std::span<const Observation> observations, int causes,
                                const BootstrapModel& model, double point, int k,
                                double level, const BootstrapSpec& spec,
                                NormalCiOptions options = {});

// 2 [l_k(naive) - l_k(constrained_naive(theta))] on raw counts; +inf when
// the constrained likelihood is -inf.
double lr_statistic(const TallyTable& tally, int k, double t0, double theta);

// {theta : lr_statistic <= critical_value} by bisection (tolerance 1e-6)
// on each side of the naive estimate.
ConfidenceInterval ci_likelihood_ratio(const TallyTable& tally, int k, double t0, double level,
                                       double critical_value);

struct CriticalValue {
  double value = 0.0;
  std::string provenance;
};

// Tabulated quantile of the universal limit of the current status
// likelihood ratio statistic; nullopt for untabulated levels.
std::optional<CriticalValue> tabulated_lr_critical_value(double level);

struct LrNullSimulation {
  int sample_size = 20000;
  int replications = 4000;
  std::uint64_t seed = 20240601;
  int threads = 0;
};

// Monte Carlo approximation of the level-quantile of the null LR statistic:
// uniform observation and event times, interior point 1/2.
CriticalValue simulate_lr_critical_value(double level, const LrNullSimulation& sim = {});

}  // namespace crcs
