#include "crcs/report.hpp"

#include <cmath>
#include <ostream>

#include "json.hpp"

#include "crcs/io.hpp"

namespace crcs {
namespace {

std::string cell(double x) { return std::isfinite(x) ? format_number(x) : std::string("NA"); }

nlohmann::json number(double x) {
  if (!std::isfinite(x)) return nullptr;
  return round_significant(x);
}

}  // namespace

void write_coverage_csv_header(std::ostream& out) {
  out << "grid,t0,cause,method,estimator,truth,coverage,mean_width,mc_se,replications,undefined,"
         "mean_estimate,estimate_var,mean_plugin_var\n";
}

void write_coverage_csv_rows(std::ostream& out, const CoverageReport& report) {
  for (const auto& r : report.rows) {
    out << report.label << ',' << cell(r.t0) << ',' << r.cause + 1 << ',' << to_string(r.method) << ','
        << to_string(r.estimator) << ',' << cell(r.truth) << ',' << cell(r.coverage) << ',' << cell(r.mean_width)
        << ',' << cell(r.mc_se) << ',' << r.replications << ',' << r.undefined << ',' << cell(r.mean_estimate) << ','
        << cell(r.estimate_var) << ',' << cell(r.mean_plugin_var) << '\n';
  }
}

std::string coverage_reports_json(std::span<const CoverageReport> reports, int indent) {
  nlohmann::json all = nlohmann::json::array();
  for (const auto& report : reports) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : report.rows) {
      rows.push_back({{"t0", number(r.t0)},
                      {"cause", r.cause + 1},
                      {"method", std::string(to_string(r.method))},
                      {"estimator", std::string(to_string(r.estimator))},
                      {"truth", number(r.truth)},
                      {"coverage", number(r.coverage)},
                      {"mean_width", number(r.mean_width)},
                      {"mc_se", number(r.mc_se)},
                      {"replications", r.replications},
                      {"undefined", r.undefined},
                      {"mean_estimate", number(r.mean_estimate)},
                      {"estimate_var", number(r.estimate_var)},
                      {"mean_plugin_var", number(r.mean_plugin_var)}});
    }
    all.push_back({{"grid", report.label},
                   {"grid_points", report.grid_points},
                   {"n", report.n},
                   {"replications", report.replications},
                   {"rows", std::move(rows)}});
  }
  return all.dump(indent);
}

void write_plot_data(std::ostream& out, std::span<const CoverageReport> reports, bool all_causes) {
  out << "grid,cause,method,estimator,t0,coverage,mean_width\n";
  for (const auto& report : reports) {
    for (const auto& r : report.rows) {
      if (!all_causes && r.cause != 0) continue;
      out << report.label << ',' << r.cause + 1 << ',' << to_string(r.method) << ',' << to_string(r.estimator)
          << ',' << cell(r.t0) << ',' << cell(r.coverage) << ',' << cell(r.mean_width) << '\n';
    }
  }
}

void write_rate_csv(std::ostream& out, std::span<const RateRow> rows) {
  out << "n,spacing,grid_points,t_n,truth,mean_deviation,sd_deviation,var_scaled_sparse,var_scaled_cube_root,"
         "target_variance\n";
  for (const auto& r : rows) {
    out << r.n << ',' << cell(r.spacing) << ',' << r.grid_points << ',' << cell(r.t_n) << ',' << cell(r.truth)
        << ',' << cell(r.mean_deviation) << ',' << cell(r.sd_deviation) << ',' << cell(r.var_scaled_sparse) << ','
        << cell(r.var_scaled_cube_root) << ',' << cell(r.target_variance) << '\n';
  }
}

}  // namespace crcs
