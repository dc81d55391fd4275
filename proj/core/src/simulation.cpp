#include "crcs/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <random>

#include "crcs/io.hpp"
#include "crcs/isotonic.hpp"
#include "crcs/parallel.hpp"
#include "crcs/special.hpp"
#include "crcs/tally.hpp"

namespace crcs {
namespace {

constexpr double kNever = std::numeric_limits<double>::infinity();

// Salt separating bootstrap streams from data streams.
constexpr std::uint64_t kBootstrapSalt = 0xB0075A1DULL;

bool exact_member(const std::vector<double>& sorted, double x) {
  return std::binary_search(sorted.begin(), sorted.end(), x);
}

double draw_event_time(const EventLaw& law, std::mt19937_64& rng) {
  if (law.kind == EventLaw::Kind::kPointMass) return law.value;
  std::gamma_distribution<double> g(law.shape, law.scale);
  return g(rng);
}

// Support point where an evaluation point is estimated; throws if the point
// cannot be estimated under the configured model.
double estimation_point(const SimulationConfig& config, double t0) {
  switch (config.model) {
    case ObservationModel::kDiscrete:
      if (!exact_member(config.observation.grid, t0)) {
        throw Error("evaluation point " + format_number(t0) + " is not on the observation grid");
      }
      return t0;
    case ObservationModel::kGrouped: {
      const auto idx = config.observation.scheme->locate(t0);
      if (idx < 0) throw Error("evaluation point " + format_number(t0) + " is outside the grouping scheme");
      return config.observation.scheme->representatives()[static_cast<std::size_t>(idx)];
    }
    case ObservationModel::kSmooth:
      if (!(t0 > config.observation.lo && t0 <= config.observation.hi)) {
        throw Error("evaluation point " + format_number(t0) + " is outside the observation range");
      }
      return t0;
  }
  return t0;
}

struct Accumulator {
  int covered = 0;
  int defined = 0;
  double width_sum = 0.0;
  double plugin_sum = 0.0;
  int plugin_count = 0;
};

}  // namespace

double EventLaw::cdf(double t) const {
  if (kind == Kind::kPointMass) return t >= value ? 1.0 : 0.0;
  return gamma_cdf(t, shape, scale);
}

double EventLaw::cdf_integral(double a, double b) const {
  if (b <= a) return 0.0;
  if (kind == Kind::kPointMass) return std::max(0.0, b - std::max(a, value));
  return gamma_cdf_integral(b, shape, scale) - gamma_cdf_integral(a, shape, scale);
}

void SimulationConfig::validate() const {
  if (cause_probabilities.empty()) throw Error("at least one cause is required");
  if (event_laws.size() != cause_probabilities.size()) throw Error("one event law per cause is required");
  double total = 0.0;
  for (double p : cause_probabilities) {
    if (!(p >= 0.0)) throw Error("cause probabilities must be nonnegative");
    total += p;
  }
  if (total > 1.0 + 1e-12) throw Error("cause probabilities must sum to at most 1");
  for (const auto& law : event_laws) {
    if (law.kind == EventLaw::Kind::kGamma && !(law.shape > 0.0 && law.scale > 0.0)) {
      throw Error("gamma shape and scale must be positive");
    }
  }
  if (n < 1) throw Error("n must be positive");
  if (replications < 1) throw Error("replications must be positive");
  if (model == ObservationModel::kDiscrete) {
    const auto& g = observation.grid;
    if (g.empty()) throw Error("the discrete model needs an observation grid");
    for (std::size_t i = 1; i < g.size(); ++i) {
      if (!(g[i - 1] < g[i])) throw Error("observation grid must be strictly increasing");
    }
  } else {
    if (!(observation.lo < observation.hi)) throw Error("observation range needs lo < hi");
    if (model == ObservationModel::kGrouped && !observation.scheme) {
      throw Error("the grouped model needs a grouping scheme");
    }
  }
}

std::vector<double> reference_grid(double gap) {
  std::vector<double> grid;
  // Built from integers so that every point is the correctly rounded decimal.
  if (gap == 10.0) {
    for (int j = 1; j <= 3; ++j) grid.push_back(10.0 * j);
  } else if (gap == 2.0) {
    for (int j = 3; j <= 17; ++j) grid.push_back(2.0 * j);
  } else if (gap == 0.5) {
    for (int j = 11; j <= 70; ++j) grid.push_back(j / 2.0);
  } else if (gap == 0.1) {
    for (int j = 51; j <= 350; ++j) grid.push_back(j / 10.0);
  } else {
    throw Error("no reference grid with gap " + format_number(gap));
  }
  return grid;
}

SimulationConfig reference_config(double gap, int n, int replications, std::uint64_t seed) {
  SimulationConfig c;
  c.model = ObservationModel::kDiscrete;
  c.cause_probabilities = {0.6, 0.4};
  c.event_laws = {EventLaw::gamma(5.0, 3.0), EventLaw::gamma(9.0, 2.0)};
  c.observation.grid = reference_grid(gap);
  c.observation.lo = c.observation.grid.front();
  c.observation.hi = c.observation.grid.back();
  c.n = n;
  c.replications = replications;
  c.seed = seed;
  c.evaluation_points = {10.0, 20.0, 30.0};
  c.label = "gap " + format_number(gap);
  return c;
}

double true_cif(const SimulationConfig& config, double t, int k) {
  const auto idx = static_cast<std::size_t>(k);
  return config.cause_probabilities.at(idx) * config.event_laws.at(idx).cdf(t);
}

double true_target(const SimulationConfig& config, double point, int k) {
  if (config.model != ObservationModel::kGrouped) return true_cif(config, point, k);
  const auto cell = config.observation.scheme->locate(point);
  if (cell < 0) throw Error("point is outside the grouping scheme");
  const Interval& iv = config.observation.scheme->intervals()[static_cast<std::size_t>(cell)];
  // G is uniform on (lo, hi]; average F over the part of the cell it charges.
  const double a = std::max(iv.lower, config.observation.lo);
  const double b = std::min(iv.upper, config.observation.hi);
  if (!(b > a)) throw Error("cell carries no observation mass");
  const auto idx = static_cast<std::size_t>(k);
  return config.cause_probabilities[idx] * config.event_laws[idx].cdf_integral(a, b) / (b - a);
}

std::vector<Observation> generate_dataset(const SimulationConfig& config, std::uint64_t replication_index) {
  config.validate();
  std::mt19937_64 rng(derive_seed(config.seed, replication_index));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const auto& grid = config.observation.grid;
  std::uniform_int_distribution<std::size_t> pick(0, grid.empty() ? 0 : grid.size() - 1);
  const double lo = config.observation.lo;
  const double hi = config.observation.hi;

  std::vector<Observation> data(static_cast<std::size_t>(config.n));
  for (auto& obs : data) {
    const double u = unif(rng);
    int cause = 0;
    double acc = 0.0;
    for (std::size_t k = 0; k < config.cause_probabilities.size(); ++k) {
      acc += config.cause_probabilities[k];
      if (u < acc) {
        cause = static_cast<int>(k) + 1;
        break;
      }
    }
    const double x = cause > 0 ? draw_event_time(config.event_laws[static_cast<std::size_t>(cause - 1)], rng)
                               : kNever;
    double c;
    if (config.model == ObservationModel::kDiscrete) {
      c = grid[pick(rng)];
    } else {
      c = hi - (hi - lo) * unif(rng);  // uniform on (lo, hi]
    }
    obs.time = c;
    obs.status = x <= c ? cause : 0;
  }
  if (config.model == ObservationModel::kGrouped) return round_to_scheme(data, *config.observation.scheme);
  return data;
}

TallyTable tally_for(const SimulationConfig& config, const std::vector<Observation>& data) {
  if (config.model == ObservationModel::kGrouped) {
    return tally_grouped(data, *config.observation.scheme, config.causes());
  }
  return tally_discrete(data, config.causes());
}

const CoverageRow* CoverageReport::find(double t0, int cause, CiMethod method, EstimatorKind est) const {
  for (const auto& row : rows) {
    if (row.t0 == t0 && row.cause == cause && row.method == method && row.estimator == est) return &row;
  }
  return nullptr;
}

CoverageReport coverage_experiment(const SimulationConfig& config, const ExperimentOptions& options) {
  config.validate();
  options.settings.validate();
  if (!(options.level > 0.0 && options.level < 1.0)) throw Error("level must lie in (0,1)");
  const bool wants_lr = std::find(options.methods.begin(), options.methods.end(), CiMethod::kLikelihoodRatio) !=
                        options.methods.end();
  if (wants_lr && !(options.lr_critical_value > 0.0)) throw Error("likelihood ratio intervals need a critical value");
  const bool wants_bootstrap =
      std::find(options.methods.begin(), options.methods.end(), CiMethod::kBootstrap) != options.methods.end();
  if (wants_bootstrap && options.bootstrap_resamples < 1) throw Error("bootstrap needs at least one resample");

  const int causes = config.causes();
  std::vector<double> points;
  for (double t0 : config.evaluation_points) points.push_back(estimation_point(config, t0));

  // Row layout: point, cause, method, estimator. Likelihood ratio rows use the naive estimator only.
  CoverageReport report;
  report.label = config.label;
  report.n = config.n;
  report.replications = config.replications;
  switch (config.model) {
    case ObservationModel::kDiscrete: report.grid_points = config.observation.grid.size(); break;
    case ObservationModel::kGrouped: report.grid_points = config.observation.scheme->size(); break;
    case ObservationModel::kSmooth: report.grid_points = 0; break;
  }
  for (double p : points) {
    for (int k = 0; k < causes; ++k) {
      for (CiMethod m : options.methods) {
        for (EstimatorKind e : options.estimators) {
          if (m == CiMethod::kLikelihoodRatio && e != EstimatorKind::kNaive) continue;
          CoverageRow row;
          row.t0 = p;
          row.cause = k;
          row.method = m;
          row.estimator = e;
          row.truth = true_target(config, p, k);
          row.replications = config.replications;
          report.rows.push_back(row);
        }
      }
      if (wants_lr && std::find(options.estimators.begin(), options.estimators.end(), EstimatorKind::kNaive) ==
                          options.estimators.end()) {
        CoverageRow row;
        row.t0 = p;
        row.cause = k;
        row.method = CiMethod::kLikelihoodRatio;
        row.estimator = EstimatorKind::kNaive;
        row.truth = true_target(config, p, k);
        row.replications = config.replications;
        report.rows.push_back(row);
      }
    }
  }

  struct Outcome {
    bool defined = false;
    bool covered = false;
    double width = 0.0;
    double estimate = 0.0;
    double plugin = std::numeric_limits<double>::quiet_NaN();
  };
  const std::size_t rows = report.rows.size();
  const auto reps = static_cast<std::size_t>(config.replications);
  std::vector<Outcome> outcomes(reps * rows);

  parallel_for(reps, options.threads, [&](std::size_t r) {
    const auto data = generate_dataset(config, r);
    const TallyTable tally = tally_for(config, data);
    std::map<EstimatorKind, StepEstimate> fits;
    std::map<EstimatorKind, std::vector<std::vector<double>>> boot;
    for (const auto& row : report.rows) {
      if (!fits.count(row.estimator)) fits[row.estimator] = estimate(tally, row.estimator, config.model, options.settings);
      if (row.method == CiMethod::kBootstrap && !boot.count(row.estimator)) {
        BootstrapSpec spec;
        spec.estimator = row.estimator;
        spec.resamples = options.bootstrap_resamples;
        spec.seed = derive_seed(config.seed ^ kBootstrapSalt, r);
        spec.threads = 1;
        spec.settings = options.settings;
        boot[row.estimator] = bootstrap_replicates(tally, points, spec);
      }
    }
    for (std::size_t i = 0; i < rows; ++i) {
      const CoverageRow& row = report.rows[i];
      Outcome& out = outcomes[r * rows + i];
      const StepEstimate& fit = fits.at(row.estimator);
      out.estimate = fit.value_at(row.t0, row.cause);
      const auto at = tally.find(row.t0);
      const bool observed = at >= 0 && tally.total(static_cast<std::size_t>(at)) > 0;
      if (observed) out.plugin = covariance_plugin(tally, fit, row.t0).matrix(row.cause, row.cause);

      ConfidenceInterval ci;
      switch (row.method) {
        case CiMethod::kNormal:
          if (!observed) continue;
          ci = ci_normal(tally, fit, row.t0, row.cause, options.level);
          break;
        case CiMethod::kBootstrap: {
          const auto& b = boot.at(row.estimator);
          const std::size_t p = static_cast<std::size_t>(
              std::find(points.begin(), points.end(), row.t0) - points.begin());
          std::vector<double> column(b.size());
          for (std::size_t j = 0; j < b.size(); ++j) {
            column[j] = b[j][p * static_cast<std::size_t>(causes) + static_cast<std::size_t>(row.cause)];
          }
          ci = bootstrap_interval(row.t0, row.cause, out.estimate, column, options.level);
          break;
        }
        case CiMethod::kLikelihoodRatio:
          ci = ci_likelihood_ratio(tally, row.cause, row.t0, options.level, options.lr_critical_value);
          break;
      }
      out.defined = true;
      out.covered = ci.contains(row.truth);
      out.width = ci.width();
    }
  });

  const double rep_count = static_cast<double>(reps);
  for (std::size_t i = 0; i < rows; ++i) {
    CoverageRow& row = report.rows[i];
    Accumulator acc;
    double est_sum = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const Outcome& out = outcomes[r * rows + i];
      est_sum += out.estimate;
      if (out.defined) {
        ++acc.defined;
        acc.width_sum += out.width;
        if (out.covered) ++acc.covered;
      }
      if (!std::isnan(out.plugin)) {
        acc.plugin_sum += out.plugin;
        ++acc.plugin_count;
      }
    }
    row.mean_estimate = est_sum / rep_count;
    double ss = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      const double d = outcomes[r * rows + i].estimate - row.mean_estimate;
      ss += d * d;
    }
    row.estimate_var = reps > 1 ? ss / (rep_count - 1.0) : 0.0;
    row.undefined = config.replications - acc.defined;
    row.coverage = acc.covered / rep_count;
    row.mc_se = std::sqrt(row.coverage * (1.0 - row.coverage) / rep_count);
    row.mean_width = acc.defined > 0 ? acc.width_sum / acc.defined : std::numeric_limits<double>::quiet_NaN();
    row.mean_plugin_var =
        acc.plugin_count > 0 ? acc.plugin_sum / acc.plugin_count : std::numeric_limits<double>::quiet_NaN();
  }
  return report;
}

std::vector<RateRow> rate_experiment(const RateConfig& config) {
  if (!(config.gamma > 0.0 && config.gamma < 1.0)) throw Error("rate exponent must lie in (0,1)");
  if (!(config.t0 > 0.0 && config.t0 < 1.0)) throw Error("t0 must lie in (0,1) after rescaling");
  if (!(config.lo < config.hi)) throw Error("observation range needs lo < hi");
  if (config.replications < 2) throw Error("at least two replications are required");
  if (!(config.probability >= 0.0 && config.probability <= 1.0)) throw Error("probability must lie in [0,1]");
  auto f0 = [&](double u) { return config.probability * config.law.cdf(config.lo + (config.hi - config.lo) * u); };

  std::vector<RateRow> out;
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    const int n = config.n_values[ni];
    if (n < 1) throw Error("sample sizes must be positive");
    const double h = std::pow(static_cast<double>(n), -config.gamma);
    const auto count = static_cast<std::size_t>(std::floor(1.0 / h + 1e-9));
    std::vector<double> grid(count);
    for (std::size_t j = 0; j < count; ++j) grid[j] = static_cast<double>(j + 1) * h;
    const auto below = std::lower_bound(grid.begin(), grid.end(), config.t0 - 1e-12 * h);
    if (below == grid.begin()) throw Error("no grid point below t0 for n = " + std::to_string(n));
    const std::size_t at = static_cast<std::size_t>(below - grid.begin()) - 1;
    std::vector<double> truth(count);
    for (std::size_t j = 0; j < count; ++j) truth[j] = f0(grid[j]);

    std::vector<double> deviation(static_cast<std::size_t>(config.replications));
    parallel_for(deviation.size(), config.threads, [&](std::size_t r) {
      std::mt19937_64 rng(derive_seed(derive_seed(config.seed, ni), r));
      std::uniform_real_distribution<double> unif(0.0, 1.0);
      std::uniform_int_distribution<std::size_t> pick(0, count - 1);
      std::vector<double> events(count, 0.0), totals(count, 0.0);
      for (int i = 0; i < n; ++i) {
        const bool has_event = unif(rng) < config.probability;
        const double x = has_event ? (draw_event_time(config.law, rng) - config.lo) / (config.hi - config.lo) : kNever;
        const std::size_t c = pick(rng);
        totals[c] += 1.0;
        if (x <= grid[c]) events[c] += 1.0;
      }
      const auto fit = isotonic_ratio(events, totals);
      deviation[r] = fit[at] - truth[at];
    });

    RateRow row;
    row.n = n;
    row.spacing = h;
    row.grid_points = count;
    row.t_n = grid[at];
    row.truth = truth[at];
    const double reps = static_cast<double>(deviation.size());
    row.mean_deviation = std::accumulate(deviation.begin(), deviation.end(), 0.0) / reps;
    double ss = 0.0;
    for (double d : deviation) ss += (d - row.mean_deviation) * (d - row.mean_deviation);
    const double var = ss / (reps - 1.0);
    row.sd_deviation = std::sqrt(var);
    row.var_scaled_sparse = std::pow(static_cast<double>(n), 1.0 - config.gamma) * var;
    row.var_scaled_cube_root = std::pow(static_cast<double>(n), 2.0 / 3.0) * var;
    const double ft0 = f0(config.t0);
    row.target_variance = ft0 * (1.0 - ft0);
    out.push_back(row);
  }
  return out;
}

namespace {

std::vector<double> parse_list(std::string_view value, std::size_t line) {
  std::vector<double> out;
  for (auto part : split(value, ',')) {
    part = trim(part);
    if (!part.empty()) out.push_back(parse_double(part, line));
  }
  return out;
}

EventLaw parse_law(std::string_view text, std::size_t line) {
  text = trim(text);
  const auto open = text.find('(');
  const auto close = text.rfind(')');
  if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
    throw ParseError(line, "expected gamma(shape, scale) or point(x)");
  }
  const auto name = trim(text.substr(0, open));
  const auto args = parse_list(text.substr(open + 1, close - open - 1), line);
  if (name == "gamma" && args.size() == 2) return EventLaw::gamma(args[0], args[1]);
  if (name == "point" && args.size() == 1) return EventLaw::point_mass(args[0]);
  throw ParseError(line, "expected gamma(shape, scale) or point(x)");
}

int parse_positive_int(std::string_view value, std::size_t line, bool allow_zero = false) {
  const long long v = parse_integer(trim(value), line);
  if (v < (allow_zero ? 0 : 1) || v > std::numeric_limits<int>::max()) {
    throw ParseError(line, "expected a positive integer");
  }
  return static_cast<int>(v);
}

}  // namespace

SimulationPlan read_simulation_plan(std::istream& in, const std::string& base_dir) {
  SimulationPlan plan;
  SimulationConfig& c = plan.config;
  ExperimentOptions& o = plan.options;
  c.evaluation_points.clear();
  bool have_range = false;
  std::string line;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    auto text = trim(line);
    if (text.empty() || text.front() == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string_view::npos) throw ParseError(number, "expected key = value");
    const std::string key(trim(text.substr(0, eq)));
    const auto value = trim(text.substr(eq + 1));
    try {
      if (key == "model") {
        c.model = parse_observation_model(value);
      } else if (key == "cause_probabilities") {
        c.cause_probabilities = parse_list(value, number);
      } else if (key == "event_laws") {
        c.event_laws.clear();
        for (auto part : split(value, ';')) {
          if (!trim(part).empty()) c.event_laws.push_back(parse_law(part, number));
        }
      } else if (key == "grid") {
        c.observation.grid = parse_list(value, number);
      } else if (key == "grid_gap") {
        const double gap = parse_double(value, number);
        c.observation.grid = reference_grid(gap);
        if (c.label.empty()) c.label = "gap " + format_number(gap);
      } else if (key == "uniform") {
        const auto range = parse_list(value, number);
        if (range.size() != 2) throw ParseError(number, "expected lo, hi");
        c.observation.lo = range[0];
        c.observation.hi = range[1];
        have_range = true;
      } else if (key == "cells") {
        const auto cells = parse_list(value, number);
        if (cells.size() != 3) throw ParseError(number, "expected lo, hi, width");
        c.observation.scheme = GroupingScheme::uniform_cells(cells[0], cells[1], cells[2]);
      } else if (key == "scheme_file") {
        const auto path = std::filesystem::path(base_dir) / std::string(value);
        c.observation.scheme = read_grouping_scheme_file(path.string());
      } else if (key == "n") {
        c.n = parse_positive_int(value, number);
      } else if (key == "replications") {
        c.replications = parse_positive_int(value, number);
      } else if (key == "seed") {
        const long long s = parse_integer(value, number);
        if (s < 0) throw ParseError(number, "seed must be nonnegative");
        c.seed = static_cast<std::uint64_t>(s);
      } else if (key == "evaluation_points") {
        c.evaluation_points = parse_list(value, number);
      } else if (key == "label") {
        c.label = std::string(value);
      } else if (key == "methods") {
        o.methods.clear();
        for (auto part : split(value, ',')) o.methods.push_back(parse_ci_method(trim(part)));
      } else if (key == "estimators") {
        o.estimators.clear();
        for (auto part : split(value, ',')) o.estimators.push_back(parse_estimator_kind(trim(part)));
      } else if (key == "level") {
        o.level = parse_double(value, number);
      } else if (key == "bootstrap_resamples") {
        o.bootstrap_resamples = parse_positive_int(value, number);
      } else if (key == "lr_critical_value") {
        o.lr_critical_value = parse_double(value, number);
      } else {
        throw ParseError(number, "unknown key '" + key + "'");
      }
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(number, e.what());
    }
  }
  if (!have_range && !c.observation.grid.empty()) {
    c.observation.lo = c.observation.grid.front();
    c.observation.hi = c.observation.grid.back();
  }
  if (c.evaluation_points.empty()) throw ParseError(number, "evaluation_points is required");
  try {
    c.validate();
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
  return plan;
}

}  // namespace crcs
