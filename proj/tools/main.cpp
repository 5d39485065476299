#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "diracsea/check.hpp"
#include "diracsea/config.hpp"
#include "diracsea/experiments.hpp"
#include "diracsea/io.hpp"

namespace {

using namespace diracsea;

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::optional<std::uint64_t> seed;
  std::string backend;
  std::string cutoffs;
  int verbosity = 0;
};

RunConfig load(const Options& o) {
  RunConfig rc;
  if (!o.config_path.empty()) rc.scenario = parse_config_file(o.config_path);
  if (o.seed) rc.scenario.seed = *o.seed;
  if (!o.backend.empty()) rc.scenario.backend = parse_backend(o.backend);
  if (!o.cutoffs.empty()) rc.scenario.cutoffs = parse_int_list("cutoffs", o.cutoffs);
  rc.scenario.validate();
  rc.out_dir = o.out_dir;
  rc.verbosity = o.verbosity;
  return rc;
}

void write_outputs(const Report& report, const std::string& out_dir) {
  std::filesystem::create_directories(out_dir);
  const std::filesystem::path dir(out_dir);
  std::ofstream csv(dir / (report.scenario + "_series.csv"), std::ios::binary);
  write_series_csv(report, csv);
  std::ofstream json(dir / (report.scenario + "_report.json"), std::ios::binary);
  json << report_json(report);
  if (!csv || !json) throw std::runtime_error("cannot write outputs to " + out_dir);
}

void print_summary(const Report& report, int verbosity) {
  std::cout << report.scenario << " seed=" << report.seed << "\n";
  if (verbosity > 0)
    for (const auto& [k, v] : report.metrics) std::cout << "  " << k << " = " << format_double(v) << "\n";
  for (const auto& f : report.flags)
    std::cout << (f.passed ? "  PASS " : "  FAIL ") << f.name << ": " << f.metric << " = "
              << format_double(report.metric(f.metric)) << " " << f.comparison << " "
              << (f.comparison == "true" ? "" : format_double(f.tolerance)) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantized Dirac field in a truncated plane-wave basis: checks and gauge experiments"};
  app.require_subcommand(1);

  Options opts;
  std::uint64_t check_seed = 1;
  auto* check = app.add_subcommand("check", "run the invariant suites and print a pass/fail table");
  check->add_option("--seed", check_seed, "seed for random operators and drives");

  const std::map<std::string, std::function<Report(const ScenarioConfig&)>> runs = {
      {"baseline", run_free_baseline},
      {"gauge-heisenberg", run_heisenberg_gauge},
      {"gauge-schrodinger", run_schrodinger_gauge_scan},
      {"energy-heisenberg", run_heisenberg_energy_scan},
      {"equivalence", run_picture_equivalence},
  };
  const std::map<std::string, std::string> blurbs = {
      {"baseline", "free evolution of the two-mode state against closed forms"},
      {"gauge-heisenberg", "gauge-related Heisenberg runs over the cutoff scan"},
      {"gauge-schrodinger", "Schrodinger free-field energy under pure-gauge potentials, f sweep"},
      {"energy-heisenberg", "Heisenberg free-field energy identity, f sweep"},
      {"equivalence", "Schrodinger vs Heisenberg observables under random drives"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, run] : runs) {
    auto* sub = app.add_subcommand(name, blurbs.at(name));
    sub->add_option("--config", opts.config_path, "key = value scenario file")->check(CLI::ExistingFile);
    sub->add_option("--out-dir", opts.out_dir, "directory for <name>_series.csv and <name>_report.json");
    sub->add_option("--seed", opts.seed, "random seed (overrides the config)");
    sub->add_option("--backend", opts.backend, "fock, gaussian or both")
        ->check(CLI::IsMember({"fock", "gaussian", "both"}));
    sub->add_option("--cutoffs", opts.cutoffs, "comma-separated n_max scan, e.g. 2,3,4");
    sub->add_flag("-v,--verbose", opts.verbosity, "print every metric");
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  if (check->parsed()) {
    CheckOptions co;
    co.seed = check_seed;
    const auto results = run_check_suites(co);
    print_check_table(results, std::cout);
    for (const auto& r : results)
      if (!r.passed) return kExitFail;
    return 0;
  }

  for (const auto& [name, sub] : subs) {
    if (!sub->parsed()) continue;
    try {
      const RunConfig rc = load(opts);
      const Report report = runs.at(name)(rc.scenario);
      write_outputs(report, rc.out_dir);
      print_summary(report, rc.verbosity);
      return report.passed() ? 0 : kExitFail;
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitFail;
    }
  }
  return kExitUsage;
}
