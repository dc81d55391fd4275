// crcs: estimation, confidence intervals and simulation for competing risks
// current status data.
//
// Exit codes: 0 success, 1 unexpected failure, 2 malformed input or invalid
// arguments, 3 solver non-convergence (diagnostics are still written).

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "crcs.hpp"

namespace {

using nlohmann::ordered_json;
using namespace crcs;

constexpr int kExitFailure = 1;
constexpr int kExitInput = 2;
constexpr int kExitNonConvergence = 3;

// Invalid arguments detected after CLI11 parsing.
struct UsageError : Error {
  using Error::Error;
};

ordered_json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_significant(x);
}

template <typename T>
std::vector<std::string> names(const std::vector<T>& items) {
  std::vector<std::string> out;
  for (const auto& item : items) out.emplace_back(to_string(item));
  return out;
}

std::vector<std::string> split_list(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& entry : raw) {
    for (auto part : split(entry, ',')) {
      part = trim(part);
      if (!part.empty()) out.emplace_back(part);
    }
  }
  return out;
}

std::vector<double> parse_numbers(const std::vector<std::string>& raw) {
  std::vector<double> out;
  for (const auto& s : split_list(raw)) out.push_back(parse_double(s));
  return out;
}

// Output sink: PREFIX.csv (and PREFIX.json) when a prefix is given, stdout
// otherwise.
class Outputs {
 public:
  explicit Outputs(std::string prefix) : prefix_(std::move(prefix)) {}
  bool has_prefix() const { return !prefix_.empty(); }
  std::string path(const std::string& suffix) const { return prefix_ + suffix; }

  void write(const std::string& suffix, const std::string& content) const {
    if (!has_prefix()) {
      if (suffix == ".csv") std::cout << content;
      return;
    }
    std::ofstream out(path(suffix), std::ios::binary);
    if (!out) throw Error("cannot write '" + path(suffix) + "'");
    out << content;
  }

 private:
  std::string prefix_;
};

std::string manifest_line(const ordered_json& manifest) { return "# manifest: " + manifest.dump() + "\n"; }

struct DataArgs {
  std::string input;
  std::string scheme;
  std::string model;
  int causes = 0;
};

struct LoadedData {
  ObservationModel model = ObservationModel::kDiscrete;
  std::vector<Observation> observations;
  std::optional<GroupingScheme> scheme;
  TallyTable tally;
  std::vector<std::string> warnings;
};

LoadedData load(const DataArgs& args) {
  LoadedData d;
  d.model = parse_observation_model(args.model);
  d.observations = read_observations_csv_file(args.input);
  if (d.observations.empty()) throw ParseError(0, "no observations in '" + args.input + "'");
  const int causes = args.causes > 0 ? args.causes : infer_causes(d.observations);
  if (d.model == ObservationModel::kGrouped) {
    if (args.scheme.empty()) throw UsageError("the grouped model needs --scheme");
    d.scheme = read_grouping_scheme_file(args.scheme);
    d.tally = tally_grouped(d.observations, *d.scheme, causes);
  } else {
    if (!args.scheme.empty()) throw UsageError("--scheme is only used by the grouped model");
    d.tally = tally_discrete(d.observations, causes);
  }
  if (d.model == ObservationModel::kSmooth && d.tally.size() < d.observations.size()) {
    d.warnings.push_back("smooth model with tied observation times: " +
                         std::to_string(d.observations.size() - d.tally.size()) +
                         " ties; estimation uses the distinct times");
  }
  return d;
}

ordered_json base_manifest(const std::string& command, const DataArgs& args, const LoadedData& d) {
  ordered_json m;
  m["command"] = command;
  m["version"] = CRCS_VERSION;
  m["input"] = args.input;
  if (!args.scheme.empty()) m["scheme"] = args.scheme;
  m["model"] = std::string(to_string(d.model));
  m["causes"] = d.tally.causes();
  m["n"] = d.tally.n();
  return m;
}

void add_data_options(CLI::App* cmd, DataArgs& args) {
  cmd->add_option("-i,--input", args.input, "Observation CSV with header time,status")->required();
  cmd->add_option("-m,--model", args.model, "Observation model")
      ->required()
      ->check(CLI::IsMember({"discrete", "grouped", "smooth"}));
  cmd->add_option("-s,--scheme", args.scheme, "Grouping scheme file (grouped model)");
  cmd->add_option("-K,--causes", args.causes, "Number of causes (default: largest status)")->check(CLI::PositiveNumber);
}

ordered_json diagnostics_json(const MleResult& r) {
  return {{"iterations", r.iterations},
          {"kkt_residual", number(r.kkt_residual)},
          {"log_likelihood", number(r.log_likelihood)}};
}

// Fits one estimator; a non-converged MLE carries its last iterate and marks
// the run.
struct Fit {
  StepEstimate estimate;
  std::optional<MleResult> diagnostics;
  bool converged = true;
};

Fit fit(const TallyTable& tally, EstimatorKind kind, ObservationModel model) {
  Fit f;
  if (kind != EstimatorKind::kMle) {
    f.estimate = estimate(tally, kind, model);
    return f;
  }
  try {
    f.diagnostics = mle(tally);
  } catch (const NonConvergence& e) {
    f.diagnostics = e.last();
    f.converged = false;
  }
  f.estimate = f.diagnostics->estimate;
  f.estimate.model = model;
  return f;
}


struct EstimateArgs {
  DataArgs data;
  std::vector<std::string> estimators{"mle"};
  std::string output;
};

int run_estimate(const EstimateArgs& args) {
  const LoadedData d = load(args.data);
  std::vector<EstimatorKind> kinds;
  for (const auto& s : split_list(args.estimators)) kinds.push_back(parse_estimator_kind(s));

  ordered_json manifest = base_manifest("estimate", args.data, d);
  manifest["estimators"] = names(kinds);
  if (!d.warnings.empty()) manifest["warnings"] = d.warnings;
  for (const auto& w : d.warnings) std::cerr << "warning: " << w << '\n';

  std::ostringstream csv;
  csv << manifest_line(manifest) << "point,cause,estimate,kind,model\n";
  ordered_json diagnostics = ordered_json::object();
  ordered_json estimates = ordered_json::array();
  bool converged = true;
  for (EstimatorKind kind : kinds) {
    const Fit f = fit(d.tally, kind, d.model);
    converged = converged && f.converged;
    if (f.diagnostics) {
      diagnostics[std::string(to_string(kind))] = diagnostics_json(*f.diagnostics);
      diagnostics[std::string(to_string(kind))]["converged"] = f.converged;
    }
    for (std::size_t i = 0; i < d.tally.size(); ++i) {
      if (d.tally.total(i) == 0) continue;
      double row_sum = 0.0;
      for (int k = 0; k < d.tally.causes(); ++k) {
        const double v = round_significant(f.estimate.values(static_cast<Eigen::Index>(i), k));
        row_sum += v;
        csv << format_number(d.tally.support()[i]) << ',' << k + 1 << ',' << format_number(v) << ','
            << to_string(kind) << ',' << to_string(d.model) << '\n';
        estimates.push_back({{"point", number(d.tally.support()[i])},
                             {"cause", k + 1},
                             {"estimate", v},
                             {"kind", std::string(to_string(kind))}});
      }
      if (kind == EstimatorKind::kMle && f.converged && row_sum > 1.0 + 1e-10) {
        throw Error("serialized MLE violates the sum constraint at " + format_number(d.tally.support()[i]));
      }
    }
  }
  Outputs out(args.output);
  out.write(".csv", csv.str());
  ordered_json json;
  json["manifest"] = manifest;
  json["diagnostics"] = diagnostics;
  json["estimates"] = estimates;
  out.write(".json", json.dump(2) + "\n");
  if (!converged) {
    std::cerr << "error: the MLE did not reach its optimality certificate; diagnostics written\n";
    return kExitNonConvergence;
  }
  return 0;
}


struct CiArgs {
  DataArgs data;
  std::vector<std::string> methods{"normal"};
  std::vector<std::string> estimators{"mle"};
  std::vector<std::string> points;
  double level = 0.95;
  int resamples = 200;
  std::uint64_t seed = 1;
  std::optional<double> critical_value;
  bool clip = false;
  int threads = 0;
  std::string output;
};

int run_ci(const CiArgs& args) {
  const LoadedData d = load(args.data);
  if (!(args.level > 0.0 && args.level < 1.0)) throw UsageError("--level must lie in (0,1)");
  std::vector<CiMethod> methods;
  for (const auto& s : split_list(args.methods)) methods.push_back(parse_ci_method(s));
  std::vector<EstimatorKind> kinds;
  for (const auto& s : split_list(args.estimators)) {
    const EstimatorKind k = parse_estimator_kind(s);
    if (k == EstimatorKind::kSimple) throw UsageError("confidence intervals use the mle or naive estimator");
    kinds.push_back(k);
  }
  std::vector<double> points = parse_numbers(args.points);
  if (points.empty()) points = d.tally.support();

  ordered_json manifest = base_manifest("ci", args.data, d);
  manifest["methods"] = names(methods);
  manifest["estimators"] = names(kinds);
  manifest["level"] = args.level;
  std::vector<std::string> warnings = d.warnings;
  const bool want_lr = std::find(methods.begin(), methods.end(), CiMethod::kLikelihoodRatio) != methods.end();
  const bool want_boot = std::find(methods.begin(), methods.end(), CiMethod::kBootstrap) != methods.end();
  if (want_boot) {
    manifest["bootstrap_resamples"] = args.resamples;
    manifest["seed"] = args.seed;
  }
  double critical = 0.0;
  if (want_lr) {
    std::string provenance = "user supplied";
    if (args.critical_value) {
      critical = *args.critical_value;
    } else if (const auto tab = tabulated_lr_critical_value(args.level)) {
      critical = tab->value;
      provenance = tab->provenance;
    } else {
      throw UsageError("no tabulated LR critical value for level " + format_number(args.level) +
                       "; pass --critical-value (see `crcs critical-value --simulate`)");
    }
    manifest["lr_critical_value"] = {{"value", critical}, {"provenance", provenance}};
    if (d.model != ObservationModel::kSmooth) {
      warnings.push_back("likelihood ratio intervals requested under the " + std::string(to_string(d.model)) +
                         " model; their calibration assumes the smooth model");
    }
  }
  if (!warnings.empty()) manifest["warnings"] = warnings;
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

  std::map<EstimatorKind, Fit> fits;
  bool converged = true;
  for (EstimatorKind kind : kinds) {
    fits.emplace(kind, fit(d.tally, kind, d.model));
    converged = converged && fits.at(kind).converged;
  }
  if (want_lr && !fits.count(EstimatorKind::kNaive)) fits.emplace(EstimatorKind::kNaive, fit(d.tally, EstimatorKind::kNaive, d.model));

  std::map<EstimatorKind, std::vector<std::vector<double>>> replicates;
  if (want_boot && converged) {
    for (EstimatorKind kind : kinds) {
      BootstrapSpec spec;
      spec.estimator = kind;
      spec.resamples = args.resamples;
      spec.seed = args.seed;
      spec.threads = args.threads;
      replicates[kind] = bootstrap_replicates(d.tally, points, spec);
    }
  }

  std::ostringstream csv;
  csv << manifest_line(manifest) << "point,cause,method,estimator,level,lower,upper,estimate,error\n";
  ordered_json rows = ordered_json::array();
  int row_errors = 0;
  const int causes = d.tally.causes();
  auto emit = [&](double point, int k, CiMethod method, EstimatorKind kind, const ConfidenceInterval* ci,
                  const std::string& error) {
    csv << format_number(point) << ',' << k + 1 << ',' << to_string(method) << ',' << to_string(kind) << ','
        << format_number(args.level) << ',';
    ordered_json row = {{"point", number(point)},
                        {"cause", k + 1},
                        {"method", std::string(to_string(method))},
                        {"estimator", std::string(to_string(kind))},
                        {"level", args.level}};
    if (ci) {
      csv << format_number(ci->lower) << ',' << format_number(ci->upper) << ',' << format_number(ci->estimate) << ",\n";
      row["lower"] = number(ci->lower);
      row["upper"] = number(ci->upper);
      row["estimate"] = number(ci->estimate);
    } else {
      csv << ",,," << error << '\n';
      row["error"] = error;
      ++row_errors;
    }
    rows.push_back(std::move(row));
  };

  for (std::size_t p = 0; p < points.size(); ++p) {
    const double point = points[p];
    for (int k = 0; k < causes; ++k) {
      for (CiMethod method : methods) {
        const std::vector<EstimatorKind> used =
            method == CiMethod::kLikelihoodRatio ? std::vector<EstimatorKind>{EstimatorKind::kNaive} : kinds;
        for (EstimatorKind kind : used) {
          try {
            ConfidenceInterval ci;
            const StepEstimate& est = fits.at(kind).estimate;
            NormalCiOptions opts{args.clip};
            if (d.tally.find(point) < 0) throw Error("no observations at this point");
            switch (method) {
              case CiMethod::kNormal: ci = ci_normal(d.tally, est, point, k, args.level, opts); break;
              case CiMethod::kBootstrap: {
                if (!converged) throw Error("skipped: the MLE did not converge");
                std::vector<double> column;
                for (const auto& r : replicates.at(kind)) column.push_back(r[p * static_cast<std::size_t>(causes) + static_cast<std::size_t>(k)]);
                ci = bootstrap_interval(point, k, est.value_at(point, k), column, args.level, opts);
                break;
              }
              case CiMethod::kLikelihoodRatio: ci = ci_likelihood_ratio(d.tally, k, point, args.level, critical); break;
            }
            emit(point, k, method, kind, &ci, "");
          } catch (const NonConvergence&) {
            throw;
          } catch (const Error& e) {
            emit(point, k, method, kind, nullptr, e.what());
          }
        }
      }
    }
  }

  Outputs out(args.output);
  out.write(".csv", csv.str());
  ordered_json json;
  json["manifest"] = manifest;
  ordered_json diagnostics = ordered_json::object();
  for (const auto& [kind, f] : fits) {
    if (f.diagnostics) {
      diagnostics[std::string(to_string(kind))] = diagnostics_json(*f.diagnostics);
      diagnostics[std::string(to_string(kind))]["converged"] = f.converged;
    }
  }
  json["diagnostics"] = diagnostics;
  json["intervals"] = rows;
  json["row_errors"] = row_errors;
  out.write(".json", json.dump(2) + "\n");
  if (row_errors > 0) std::cerr << "warning: " << row_errors << " interval(s) could not be computed; see the error column\n";
  if (!converged) {
    std::cerr << "error: the MLE did not reach its optimality certificate; diagnostics written\n";
    return kExitNonConvergence;
  }
  return 0;
}


struct SimulateArgs {
  std::string config;
  std::vector<std::string> grids;
  std::optional<int> n;
  std::optional<int> replications;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> methods;
  std::vector<std::string> estimators;
  std::vector<std::string> points;
  std::optional<double> level;
  std::optional<int> resamples;
  std::optional<double> critical_value;
  bool plot = false;
  bool plot_all_causes = false;
  int threads = 0;
  std::string output;
};

int run_simulate(const SimulateArgs& args) {
  if (args.config.empty() == args.grids.empty()) throw UsageError("give exactly one of --config or --grids");
  if (args.replications && *args.replications < 1) throw UsageError("--replications must be positive");
  if (args.n && *args.n < 1) throw UsageError("--n must be positive");
  if (args.plot && args.output.empty()) throw UsageError("--emit-plot-data needs --output");

  std::vector<SimulationPlan> plans;
  if (!args.config.empty()) {
    std::ifstream in(args.config);
    if (!in) throw Error("cannot open '" + args.config + "'");
    const auto base = std::filesystem::path(args.config).parent_path().string();
    plans.push_back(read_simulation_plan(in, base.empty() ? "." : base));
  } else {
    for (double gap : parse_numbers(args.grids)) {
      if (reference_grid(gap).empty()) throw UsageError("unknown reference grid gap " + format_number(gap));
      SimulationPlan plan;
      plan.config = reference_config(gap);
      plans.push_back(plan);
    }
  }
  for (auto& plan : plans) {
    auto& c = plan.config;
    auto& o = plan.options;
    if (args.n) c.n = *args.n;
    if (args.replications) c.replications = *args.replications;
    if (args.seed) c.seed = *args.seed;
    if (!args.points.empty()) c.evaluation_points = parse_numbers(args.points);
    if (!args.methods.empty()) {
      o.methods.clear();
      for (const auto& s : split_list(args.methods)) o.methods.push_back(parse_ci_method(s));
    }
    if (!args.estimators.empty()) {
      o.estimators.clear();
      for (const auto& s : split_list(args.estimators)) o.estimators.push_back(parse_estimator_kind(s));
    }
    if (args.level) o.level = *args.level;
    if (args.resamples) o.bootstrap_resamples = *args.resamples;
    if (args.critical_value) o.lr_critical_value = *args.critical_value;
    const bool lr = std::find(o.methods.begin(), o.methods.end(), CiMethod::kLikelihoodRatio) != o.methods.end();
    if (lr && !(o.lr_critical_value > 0.0)) {
      const auto tab = tabulated_lr_critical_value(o.level);
      if (!tab) throw UsageError("no tabulated LR critical value for this level; pass --critical-value");
      o.lr_critical_value = tab->value;
    }
    o.threads = args.threads;
    c.validate();
  }

  ordered_json manifest;
  manifest["command"] = "simulate";
  manifest["version"] = CRCS_VERSION;
  if (!args.config.empty()) manifest["config"] = args.config;
  ordered_json sections = ordered_json::array();
  for (const auto& plan : plans) {
    const auto& c = plan.config;
    const auto& o = plan.options;
    ordered_json s = {{"grid", c.label},
                      {"model", std::string(to_string(c.model))},
                      {"causes", c.causes()},
                      {"n", c.n},
                      {"replications", c.replications},
                      {"seed", c.seed},
                      {"methods", names(o.methods)},
                      {"estimators", names(o.estimators)},
                      {"level", o.level}};
    if (std::find(o.methods.begin(), o.methods.end(), CiMethod::kBootstrap) != o.methods.end()) {
      s["bootstrap_resamples"] = o.bootstrap_resamples;
    }
    if (std::find(o.methods.begin(), o.methods.end(), CiMethod::kLikelihoodRatio) != o.methods.end()) {
      s["lr_critical_value"] = o.lr_critical_value;
    }
    sections.push_back(std::move(s));
  }
  manifest["sections"] = sections;

  std::vector<CoverageReport> reports;
  for (const auto& plan : plans) {
    std::cerr << "simulating " << plan.config.label << " (" << plan.config.replications << " replications)\n";
    reports.push_back(coverage_experiment(plan.config, plan.options));
  }

  std::ostringstream csv;
  csv << manifest_line(manifest);
  write_coverage_csv_header(csv);
  for (const auto& r : reports) write_coverage_csv_rows(csv, r);
  Outputs out(args.output);
  out.write(".csv", csv.str());
  ordered_json json;
  json["manifest"] = manifest;
  json["reports"] = ordered_json::parse(coverage_reports_json(reports));
  out.write(".json", json.dump(2) + "\n");
  if (args.plot) {
    std::ostringstream plot;
    plot << manifest_line(manifest);
    write_plot_data(plot, reports, args.plot_all_causes);
    out.write(".plot.csv", plot.str());
  }
  return 0;
}


struct RateArgs {
  RateConfig config;
  std::vector<std::string> n_values;
  double shape = 5.0;
  double scale = 3.0;
  std::string output;
};

int run_rate(RateArgs args) {
  if (!args.n_values.empty()) {
    args.config.n_values.clear();
    for (double v : parse_numbers(args.n_values)) {
      if (v < 1 || v != std::floor(v)) throw UsageError("sample sizes must be positive integers");
      args.config.n_values.push_back(static_cast<int>(v));
    }
  }
  args.config.law = EventLaw::gamma(args.shape, args.scale);
  const auto rows = rate_experiment(args.config);
  ordered_json manifest = {{"command", "rate"},
                           {"version", CRCS_VERSION},
                           {"gamma", args.config.gamma},
                           {"n_values", args.config.n_values},
                           {"law", {{"shape", args.shape}, {"scale", args.scale}}},
                           {"probability", args.config.probability},
                           {"range", {args.config.lo, args.config.hi}},
                           {"t0", args.config.t0},
                           {"replications", args.config.replications},
                           {"seed", args.config.seed}};
  std::ostringstream csv;
  csv << manifest_line(manifest);
  write_rate_csv(csv, rows);
  Outputs(args.output).write(".csv", csv.str());
  return 0;
}


struct CriticalArgs {
  double level = 0.95;
  bool simulate = false;
  LrNullSimulation sim;
};

int run_critical(const CriticalArgs& args) {
  CriticalValue cv;
  if (args.simulate) {
    cv = simulate_lr_critical_value(args.level, args.sim);
  } else if (const auto tab = tabulated_lr_critical_value(args.level)) {
    cv = *tab;
  } else {
    throw UsageError("no tabulated value for level " + format_number(args.level) + "; use --simulate");
  }
  std::cout << ordered_json({{"level", args.level}, {"value", number(cv.value)}, {"provenance", cv.provenance}}).dump()
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nonparametric estimation for competing risks current status data"};
  app.set_version_flag("--version", std::string(CRCS_VERSION));
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: CRCS_THREADS or hardware concurrency)")
      ->check(CLI::NonNegativeNumber);

  EstimateArgs est;
  auto* c_est = app.add_subcommand("estimate", "Fit the MLE, naive or simple estimator");
  add_data_options(c_est, est.data);
  c_est->add_option("-e,--estimator", est.estimators, "mle, naive, simple (comma separated)");
  c_est->add_option("-o,--output", est.output, "Output prefix for .csv and .json (default: CSV to stdout)");

  CiArgs ci;
  auto* c_ci = app.add_subcommand("ci", "Pointwise confidence intervals");
  add_data_options(c_ci, ci.data);
  c_ci->add_option("--method", ci.methods, "normal, bootstrap, lr (comma separated)");
  c_ci->add_option("-e,--estimator", ci.estimators, "mle, naive (comma separated)");
  c_ci->add_option("-p,--points", ci.points, "Support points (default: all)");
  c_ci->add_option("--level", ci.level, "Confidence level");
  c_ci->add_option("-B,--resamples", ci.resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
  c_ci->add_option("--seed", ci.seed, "Bootstrap seed");
  c_ci->add_option("--critical-value", ci.critical_value, "LR critical value (default: tabulated)");
  c_ci->add_flag("--clip", ci.clip, "Clip normal and bootstrap intervals to [0,1]");
  c_ci->add_option("-o,--output", ci.output, "Output prefix for .csv and .json (default: CSV to stdout)");

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "Monte Carlo coverage experiment");
  c_sim->add_option("-c,--config", sim.config, "Simulation plan file");
  c_sim->add_option("--grids", sim.grids, "Reference grids by gap: 10, 2, 0.5, 0.1");
  c_sim->add_option("-n,--n", sim.n, "Sample size");
  c_sim->add_option("-r,--replications", sim.replications, "Replications");
  c_sim->add_option("--seed", sim.seed, "Master seed");
  c_sim->add_option("--method", sim.methods, "normal, bootstrap, lr");
  c_sim->add_option("-e,--estimator", sim.estimators, "mle, naive");
  c_sim->add_option("-p,--points", sim.points, "Evaluation points");
  c_sim->add_option("--level", sim.level, "Confidence level");
  c_sim->add_option("-B,--resamples", sim.resamples, "Bootstrap resamples")->check(CLI::PositiveNumber);
  c_sim->add_option("--critical-value", sim.critical_value, "LR critical value");
  c_sim->add_flag("--emit-plot-data", sim.plot, "Write PREFIX.plot.csv with coverage and width against t0");
  c_sim->add_flag("--plot-all-causes", sim.plot_all_causes, "Plot data for every cause, not only cause 1");
  c_sim->add_option("-o,--output", sim.output, "Output prefix (default: CSV to stdout)");

  RateArgs rate;
  auto* c_rate = app.add_subcommand("rate", "Univariate experiment with grid spacing n^-gamma");
  c_rate->add_option("--gamma", rate.config.gamma, "Spacing exponent in (0,1)");
  c_rate->add_option("--n-values", rate.n_values, "Sample sizes (comma separated)");
  c_rate->add_option("--t0", rate.config.t0, "Evaluation point on the rescaled [0,1] range");
  c_rate->add_option("--shape", rate.shape, "Gamma shape of the event time");
  c_rate->add_option("--scale", rate.scale, "Gamma scale of the event time");
  c_rate->add_option("--probability", rate.config.probability, "Probability that the event ever occurs");
  c_rate->add_option("--lo", rate.config.lo, "Lower end of the observation range");
  c_rate->add_option("--hi", rate.config.hi, "Upper end of the observation range");
  c_rate->add_option("-r,--replications", rate.config.replications, "Replications");
  c_rate->add_option("--seed", rate.config.seed, "Master seed");
  c_rate->add_option("-o,--output", rate.output, "Output prefix (default: CSV to stdout)");

  CriticalArgs crit;
  auto* c_crit = app.add_subcommand("critical-value", "LR critical value: tabulated or by simulation");
  c_crit->add_option("--level", crit.level, "Level");
  c_crit->add_flag("--simulate", crit.simulate, "Approximate the null quantile by Monte Carlo");
  c_crit->add_option("--sample-size", crit.sim.sample_size, "Sample size per null replication");
  c_crit->add_option("-r,--replications", crit.sim.replications, "Null replications");
  c_crit->add_option("--seed", crit.sim.seed, "Seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  ci.threads = threads;
  sim.threads = threads;
  rate.config.threads = threads;
  crit.sim.threads = threads;
  try {
    if (*c_est) return run_estimate(est);
    if (*c_ci) return run_ci(ci);
    if (*c_sim) return run_simulate(sim);
    if (*c_rate) return run_rate(rate);
    if (*c_crit) return run_critical(crit);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const NonConvergence& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}
