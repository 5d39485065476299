#include "diracsea/io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace diracsea {

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void write_series_csv(const Report& report, std::ostream& out) {
  for (std::size_t i = 0; i < report.columns.size(); ++i) out << (i ? "," : "") << report.columns[i];
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
    out << '\n';
  }
}

std::string report_json(const Report& report) {
  using json = nlohmann::ordered_json;
  auto number = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json params = json::object();
  for (const auto& [k, v] : report.params) {
    if (k == "chi") {
      if (!params.contains("chi")) params["chi"] = json::array();
      if (!v.empty()) params["chi"].push_back(v);
    } else {
      params[k] = v;
    }
  }
  json metrics = json::object();
  for (const auto& [k, v] : report.metrics) metrics[k] = number(v);
  json flags = json::array();
  for (const auto& f : report.flags)
    flags.push_back({{"name", f.name},
                     {"metric", f.metric},
                     {"value", number(report.metric(f.metric))},
                     {"comparison", f.comparison},
                     {"tolerance", f.tolerance},
                     {"passed", f.passed}});
  json doc = {{"scenario", report.scenario},
              {"params", params},
              {"seed", report.seed},
              {"metrics", metrics},
              {"pass", {{"all", report.passed()}, {"flags", flags}}}};
  return doc.dump(2) + "\n";
}

}  // namespace diracsea
