#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "crcs/estimators.hpp"
#include "crcs/inference.hpp"
#include "crcs/types.hpp"

namespace crcs {

// Law of the event time X given the cause.
struct EventLaw {
  enum class Kind { kGamma, kPointMass };
  Kind kind = Kind::kGamma;
  double shape = 1.0;  // gamma
  double scale = 1.0;  // gamma
  double value = 0.0;  // point mass

  static EventLaw gamma(double shape, double scale) { return {Kind::kGamma, shape, scale, 0.0}; }
  static EventLaw point_mass(double x) { return {Kind::kPointMass, 1.0, 1.0, x}; }
  double cdf(double t) const;
  // Integral of cdf over [a, b].
  double cdf_integral(double a, double b) const;
};

// Law of the inspection time C. Discrete model: uniform on a finite grid.
// Smooth model: continuous uniform on (lo, hi]. Grouped model: continuous
// uniform on (lo, hi], then rounded by the scheme.
struct ObservationLaw {
  std::vector<double> grid;
  double lo = 0.0;
  double hi = 1.0;
  std::optional<GroupingScheme> scheme;
};

struct SimulationConfig {
  ObservationModel model = ObservationModel::kDiscrete;
  std::vector<double> cause_probabilities;
  std::vector<EventLaw> event_laws;
  ObservationLaw observation;
  int n = 1000;
  int replications = 500;
  std::uint64_t seed = 1;
  std::vector<double> evaluation_points;
  std::string label;  // e.g. "gap 10"

  int causes() const { return static_cast<int>(cause_probabilities.size()); }
  void validate() const;
};

// Two-cause gamma mixture with P(Y=1)=0.6, P(Y=2)=0.4, Gamma(5, scale 3) and
// Gamma(9, scale 2), observed on one of the grids "gap 10", "gap 2",
// "gap 0.5", "gap 0.1", evaluated at 10, 20, 30.
SimulationConfig reference_config(double gap, int n = 1000, int replications = 500,
                                  std::uint64_t seed = 1);
// The reference grids by gap: 10 -> {10,20,30}, 2 -> {6,...,34},
// 0.5 -> {5.5,...,35}, 0.1 -> {5.1,...,35}.
std::vector<double> reference_grid(double gap);

// F_0k(t) for the configured mixture.
double true_cif(const SimulationConfig& config, double t, int k);
// The estimable target at a support point: F_0k(point) in the discrete and
// smooth models, the G-weighted average of F_0k over the cell of `point`
// in the grouped model.
double true_target(const SimulationConfig& config, double point, int k);

std::vector<Observation> generate_dataset(const SimulationConfig& config,
                                          std::uint64_t replication_index);

// Tally according to the configured model.
TallyTable tally_for(const SimulationConfig& config, const std::vector<Observation>& data);

struct ExperimentOptions {
  std::vector<CiMethod> methods{CiMethod::kNormal, CiMethod::kBootstrap};
  std::vector<EstimatorKind> estimators{EstimatorKind::kMle, EstimatorKind::kNaive};
  double level = 0.95;
  int bootstrap_resamples = 200;
  double lr_critical_value = 0.0;  // required when methods contain kLikelihoodRatio
  int threads = 0;
  SolverSettings settings{};
};

struct CoverageRow {
  double t0 = 0.0;
  int cause = 0;
  CiMethod method = CiMethod::kNormal;
  EstimatorKind estimator = EstimatorKind::kMle;
  double truth = 0.0;
  double coverage = 0.0;
  double mean_width = 0.0;
  double mc_se = 0.0;
  int replications = 0;
  int undefined = 0;  // replications without an interval (counted as misses)
  double mean_estimate = 0.0;
  double estimate_var = 0.0;     // empirical variance of the estimate
  double mean_plugin_var = 0.0;  // mean plug-in V_kk over replications where defined
};

struct CoverageReport {
  std::string label;
  std::size_t grid_points = 0;
  int n = 0;
  int replications = 0;
  std::vector<CoverageRow> rows;

  const CoverageRow* find(double t0, int cause, CiMethod method, EstimatorKind est) const;
};

// Throws before simulating if an evaluation point is off the grid (discrete
// model) or outside the scheme (grouped model).
CoverageReport coverage_experiment(const SimulationConfig& config, const ExperimentOptions& options);

struct RateConfig {
  double gamma = 0.2;
  std::vector<int> n_values{1000, 10000, 100000};
  EventLaw law = EventLaw::gamma(5.0, 3.0);
  double probability = 1.0;
  double lo = 5.0;  // observation range, rescaled to [0, 1]
  double hi = 35.0;
  double t0 = 0.5;  // rescaled
  int replications = 500;
  std::uint64_t seed = 1;
  int threads = 0;
};

struct RateRow {
  int n = 0;
  double spacing = 0.0;
  std::size_t grid_points = 0;
  double t_n = 0.0;  // rescaled
  double truth = 0.0;
  double mean_deviation = 0.0;
  double sd_deviation = 0.0;
  double var_scaled_sparse = 0.0;     // var of n^{(1-gamma)/2} deviation
  double var_scaled_cube_root = 0.0;  // var of n^{1/3} deviation
  double target_variance = 0.0;       // F_0(t0)(1 - F_0(t0))
};

// Univariate current status on the equidistant grid {h, 2h, ...} in [0, 1]
// with h = n^{-gamma}; MLE evaluated at the largest grid point below t0.
std::vector<RateRow> rate_experiment(const RateConfig& config);

struct SimulationPlan {
  SimulationConfig config;
  ExperimentOptions options;
};

// Plain-text `key = value` configuration; see README for keys.
SimulationPlan read_simulation_plan(std::istream& in, const std::string& base_dir = ".");

}  // namespace crcs
