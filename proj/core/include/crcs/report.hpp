#pragma once

#include <iosfwd>
#include <span>
#include <string>

#include "crcs/simulation.hpp"

namespace crcs {

// Header: grid,t0,cause,method,estimator,truth,coverage,mean_width,mc_se,
// replications,undefined,mean_estimate,estimate_var,mean_plugin_var.
// Causes are written 1-based; numbers with 12 significant digits.
void write_coverage_csv_header(std::ostream& out);
void write_coverage_csv_rows(std::ostream& out, const CoverageReport& report);

// JSON array of report objects.
std::string coverage_reports_json(std::span<const CoverageReport> reports, int indent = 2);

// Coverage and width against t0, one series per (method, estimator), cause 1
// only unless all_causes: grid,cause,method,estimator,t0,coverage,mean_width.
void write_plot_data(std::ostream& out, std::span<const CoverageReport> reports,
                     bool all_causes = false);

void write_rate_csv(std::ostream& out, std::span<const RateRow> rows);

}  // namespace crcs
