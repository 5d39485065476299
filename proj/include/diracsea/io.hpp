#pragma once

// Report emission: CSV series and JSON summaries with 17 significant digits,
// UTF-8, LF line endings.

#include <ostream>
#include <string>

#include "diracsea/experiments.hpp"

namespace diracsea {

/// Shortest-safe round-trip text for a double (printf "%.17g").
std::string format_double(double value);

/// Header row of report.columns, then one line per report row.
void write_series_csv(const Report& report, std::ostream& out);

/// {scenario, params, seed, metrics, pass}; non-finite metrics become null.
std::string report_json(const Report& report);

}  // namespace diracsea
