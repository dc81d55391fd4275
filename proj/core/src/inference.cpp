#include "crcs/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include <boost/math/distributions/normal.hpp>

#include "crcs/parallel.hpp"
#include "crcs/tally.hpp"

namespace crcs {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kBisectionTolerance = 1e-6;

std::size_t support_index(const TallyTable& tally, double point) {
  const auto i = tally.find(point);
  if (i < 0) throw Error("point is not in the support");
  return static_cast<std::size_t>(i);
}

void check_level(double level) {
  if (!(level > 0.0 && level < 1.0)) throw Error("level must lie in (0,1)");
}

// Index of the level-quantile in a sorted sample of size count.
std::size_t order_index(std::size_t count, double level) {
  auto r = static_cast<std::size_t>(std::ceil(static_cast<double>(count) * level - 1e-9));
  return std::clamp<std::size_t>(r, 1, count) - 1;
}

void clip_interval(ConfidenceInterval& ci, NormalCiOptions options) {
  if (!options.clip) return;
  ci.lower = std::clamp(ci.lower, 0.0, 1.0);
  ci.upper = std::clamp(ci.upper, 0.0, 1.0);
}

// Subject layout shared by all resamples: flat cell index point * (K+1) + column.
struct ResampleFrame {
  std::vector<double> support;
  std::vector<std::uint32_t> cells;
  int causes = 1;

  explicit ResampleFrame(const TallyTable& tally) : support(tally.support()), causes(tally.causes()) {
    cells.reserve(static_cast<std::size_t>(tally.n()));
    const auto width = static_cast<std::size_t>(causes + 1);
    // Same order as expand(): censored first, then causes.
    for (std::size_t i = 0; i < tally.size(); ++i) {
      for (std::int64_t c = 0; c < tally.censored(i); ++c) {
        cells.push_back(static_cast<std::uint32_t>(i * width + static_cast<std::size_t>(causes)));
      }
      for (int k = 0; k < causes; ++k) {
        for (std::int64_t c = 0; c < tally.count(i, k); ++c) {
          cells.push_back(static_cast<std::uint32_t>(i * width + static_cast<std::size_t>(k)));
        }
      }
    }
  }

  TallyTable draw(std::uint64_t seed) const {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, cells.size() - 1);
    const auto width = static_cast<std::size_t>(causes + 1);
    std::vector<std::int64_t> full(support.size() * width, 0);
    for (std::size_t i = 0; i < cells.size(); ++i) ++full[cells[pick(rng)]];
    std::vector<double> kept_support;
    std::vector<std::int64_t> kept_counts;
    for (std::size_t p = 0; p < support.size(); ++p) {
      const auto first = full.begin() + static_cast<std::ptrdiff_t>(p * width);
      const auto last = first + static_cast<std::ptrdiff_t>(width);
      if (std::all_of(first, last, [](std::int64_t c) { return c == 0; })) continue;
      kept_support.push_back(support[p]);
      kept_counts.insert(kept_counts.end(), first, last);
    }
    return TallyTable(std::move(kept_support), std::move(kept_counts), causes);
  }
};

}  // namespace

std::string_view to_string(CiMethod m) {
  switch (m) {
    case CiMethod::kNormal: return "normal";
    case CiMethod::kBootstrap: return "bootstrap";
    case CiMethod::kLikelihoodRatio: return "lr";
  }
  return "normal";
}

CiMethod parse_ci_method(std::string_view s) {
  if (s == "normal") return CiMethod::kNormal;
  if (s == "bootstrap") return CiMethod::kBootstrap;
  if (s == "lr" || s == "likelihood_ratio") return CiMethod::kLikelihoodRatio;
  throw Error("unknown CI method: " + std::string(s));
}

CovarianceBlock covariance_plugin(const TallyTable& tally, const StepEstimate& estimate, double point) {
  const std::size_t i = support_index(tally, point);
  if (tally.total(i) == 0) throw Error("no observations at point");
  const int causes = estimate.causes();
  const double fraction = tally.fraction(i);
  Eigen::VectorXd f(causes);
  for (int k = 0; k < causes; ++k) {
    const double v = estimate.value_at(point, k);
    f(k) = (v == 0.0 || v == 1.0) ? 0.0 : v;
  }
  CovarianceBlock block;
  block.point = point;
  block.matrix = Eigen::MatrixXd(f.asDiagonal()) - f * f.transpose();
  block.matrix /= fraction;
  return block;
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    throw Error("normal_quantile: probability outside [0,1]");
  }
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

ConfidenceInterval ci_normal(const TallyTable& tally, const StepEstimate& estimate, double point, int k,
                             double level, NormalCiOptions options) {
  check_level(level);
  if (k < 0 || k >= estimate.causes()) throw Error("cause index out of range");
  const CovarianceBlock block = covariance_plugin(tally, estimate, point);
  ConfidenceInterval ci;
  ci.point = point;
  ci.cause = k;
  ci.level = level;
  ci.method = CiMethod::kNormal;
  ci.estimate = estimate.value_at(point, k);
  ci.critical_value = normal_quantile(0.5 + level / 2.0);
  const double half =
      ci.critical_value * std::sqrt(std::max(0.0, block.matrix(k, k)) / static_cast<double>(tally.n()));
  ci.lower = ci.estimate - half;
  ci.upper = ci.estimate + half;
  clip_interval(ci, options);
  return ci;
}

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finaliser over a Weyl step
  std::uint64_t z = master + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::vector<double>> bootstrap_replicates(const TallyTable& tally, std::span<const double> points,
                                                      const BootstrapSpec& spec) {
  if (spec.resamples < 1) throw Error("bootstrap needs at least one resample");
  const ResampleFrame frame(tally);
  const int causes = tally.causes();
  std::vector<std::vector<double>> out(static_cast<std::size_t>(spec.resamples));
  parallel_for(out.size(), spec.threads, [&](std::size_t b) {
    const TallyTable resample = frame.draw(derive_seed(spec.seed, b));
    const StepEstimate est = estimate(resample, spec.estimator, ObservationModel::kDiscrete, spec.settings);
    std::vector<double>& row = out[b];
    row.resize(points.size() * static_cast<std::size_t>(causes));
    for (std::size_t p = 0; p < points.size(); ++p) {
      for (int k = 0; k < causes; ++k) row[p * static_cast<std::size_t>(causes) + static_cast<std::size_t>(k)] =
          est.value_at(points[p], k);
    }
  });
  return out;
}

ConfidenceInterval bootstrap_interval(double point, int k, double theta_hat, std::span<const double> replicates,
                                      double level, NormalCiOptions options) {
  check_level(level);
  if (replicates.empty()) throw Error("bootstrap needs at least one resample");
  std::vector<double> deviations(replicates.size());
  for (std::size_t b = 0; b < replicates.size(); ++b) deviations[b] = std::abs(replicates[b] - theta_hat);
  std::sort(deviations.begin(), deviations.end());
  ConfidenceInterval ci;
  ci.point = point;
  ci.cause = k;
  ci.level = level;
  ci.method = CiMethod::kBootstrap;
  ci.estimate = theta_hat;
  ci.resamples = static_cast<int>(replicates.size());
  ci.critical_value = deviations[order_index(deviations.size(), level)];
  ci.lower = theta_hat - ci.critical_value;
  ci.upper = theta_hat + ci.critical_value;
  clip_interval(ci, options);
  return ci;
}

ConfidenceInterval ci_bootstrap(std::span<const Observation> observations, int causes, const BootstrapModel& model,
                                double point, int k, double level, const BootstrapSpec& spec,
                                NormalCiOptions options) {
  if (k < 0 || k >= causes) throw Error("cause index out of range");
  TallyTable tally;
  if (model.model == ObservationModel::kGrouped) {
    if (!model.scheme) throw Error("grouped model needs a grouping scheme");
    tally = tally_grouped(observations, *model.scheme, causes);
  } else {
    tally = tally_discrete(observations, causes);
  }
  if (tally.find(point) < 0) throw Error("point is not in the support");
  const StepEstimate est = estimate(tally, spec.estimator, model.model, spec.settings);
  const double theta_hat = est.value_at(point, k);
  const double points[] = {point};
  const auto reps = bootstrap_replicates(tally, points, spec);
  std::vector<double> column(reps.size());
  for (std::size_t b = 0; b < reps.size(); ++b) column[b] = reps[b][static_cast<std::size_t>(k)];
  return bootstrap_interval(point, k, theta_hat, column, level, options);
}

double lr_statistic(const TallyTable& tally, int k, double t0, double theta) {
  const std::vector<double> naive = naive_estimator(tally, k);
  const double free_ll = marginal_log_likelihood(tally, k, naive);
  const double pinned_ll = marginal_log_likelihood(tally, k, constrained_naive(tally, k, t0, theta));
  if (pinned_ll == -kInf) return kInf;
  return std::max(0.0, 2.0 * (free_ll - pinned_ll));
}

ConfidenceInterval ci_likelihood_ratio(const TallyTable& tally, int k, double t0, double level,
                                       double critical_value) {
  check_level(level);
  if (!(critical_value >= 0.0)) throw Error("critical value must be nonnegative");
  const std::vector<double> naive = naive_estimator(tally, k);
  const auto at = tally.floor_index(t0);
  const double theta_hat = at < 0 ? 0.0 : naive[static_cast<std::size_t>(at)];
  auto inside = [&](double theta) { return lr_statistic(tally, k, t0, theta) <= critical_value; };

  // Each bisection keeps `in` inside the acceptance region and returns it.
  auto search = [&](double in, double out) {
    if (inside(out)) return out;
    while (std::abs(out - in) > kBisectionTolerance) {
      const double mid = 0.5 * (in + out);
      (inside(mid) ? in : out) = mid;
    }
    return in;
  };

  ConfidenceInterval ci;
  ci.point = t0;
  ci.cause = k;
  ci.level = level;
  ci.method = CiMethod::kLikelihoodRatio;
  ci.estimate = theta_hat;
  ci.critical_value = critical_value;
  ci.lower = search(theta_hat, 0.0);
  ci.upper = search(theta_hat, 1.0);
  return ci;
}

std::optional<CriticalValue> tabulated_lr_critical_value(double level) {
  if (std::abs(level - 0.95) < 1e-12) {
    return CriticalValue{2.286, "tabulated 0.95 quantile of the universal likelihood ratio limit distribution"};
  }
  return std::nullopt;
}

CriticalValue simulate_lr_critical_value(double level, const LrNullSimulation& sim) {
  check_level(level);
  if (sim.sample_size < 2 || sim.replications < 1) throw Error("invalid LR null simulation size");
  std::vector<double> stats(static_cast<std::size_t>(sim.replications));
  parallel_for(stats.size(), sim.threads, [&](std::size_t r) {
    std::mt19937_64 rng(derive_seed(sim.seed, r));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<Observation> data(static_cast<std::size_t>(sim.sample_size));
    for (auto& o : data) {
      const double x = unif(rng);
      o.time = unif(rng);
      o.status = x <= o.time ? 1 : 0;
    }
    stats[r] = lr_statistic(tally_discrete(data, 1), 0, 0.5, 0.5);
  });
  std::sort(stats.begin(), stats.end());
  CriticalValue cv;
  cv.value = stats[order_index(stats.size(), level)];
  cv.provenance = "Monte Carlo: " + std::to_string(sim.replications) + " null replications of size " +
                  std::to_string(sim.sample_size) + ", seed " + std::to_string(sim.seed);
  return cv;
}

}  // namespace crcs
