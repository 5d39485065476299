#pragma once

// Scenario drivers. Each run builds its catalogs from a ScenarioConfig,
// evolves the two-mode state (or seeded random drives), and returns a Report
// of named metrics, a series table, and pass flags that cite the metric and
// tolerance they check.

#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "diracsea/modes.hpp"
#include "diracsea/onebody.hpp"

namespace diracsea {

enum class Backend { fock, gaussian, both };

struct ModeSpec {
  IVec3 n{0, 0, 0};
  int two_s = 1;
};

/// One chi Fourier amplitude at integer wave index k. The conjugate partner
/// at -k is implied.
struct ChiSpec {
  IVec3 k{0, 0, 1};
  cplx amplitude{0.05, 0.0};
};

/// Invalid configuration value; key() names the offending entry.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string key, const std::string& what) : std::runtime_error(key + ": " + what), key_(std::move(key)) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

struct ScenarioConfig {
  int dim = 1;
  double box_length = 2.0 * std::numbers::pi;
  int n_max = 2;       ///< correlation-backend cutoff
  int fock_n_max = 1;  ///< exact-Fock cutoff
  double mass = 1.0;
  double charge = 1.0;
  ModeSpec mode1{{0, 0, 0}, 1};
  ModeSpec mode2{{0, 0, 1}, 1};
  std::vector<ChiSpec> chi{ChiSpec{}};
  double omega = 0.0;  ///< ramp frequency; 0 selects pi / t_final
  double t_final = 1.0;
  int steps = 200;
  int baseline_steps = 2000;
  int sample_stride = 10;
  std::vector<double> f_list{0.0, 0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0};
  Backend backend = Backend::both;
  std::vector<int> cutoffs{2, 3, 4};
  std::uint64_t seed = 1;
  int drives = 5;
  double drive_strength = 0.5;
  std::size_t fock_cap = 14;
  int sample_points = 0;  ///< spatial points per axis; 0 selects 4 n_max + 1

  /// Throws ConfigError naming the first invalid key.
  void validate() const;
  double ramp_frequency() const { return omega > 0.0 ? omega : std::numbers::pi / t_final; }
  Envelope envelope() const { return Envelope::ramp(ramp_frequency(), t_final); }
};

struct PassFlag {
  std::string name;
  std::string metric;
  std::string comparison;  ///< "<=", ">=" or "true"
  double tolerance = 0.0;
  bool passed = false;
};

struct Report {
  std::string scenario;
  std::vector<std::pair<std::string, std::string>> params;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, double>> metrics;  ///< NaN marks "not reached"
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<PassFlag> flags;

  void metric(const std::string& name, double value);
  double metric(const std::string& name) const;
  /// Records a flag for metric <= tolerance (or >= when `at_least`).
  void check(const std::string& name, const std::string& metric_name, double tolerance, bool at_least = false);
  /// Records a flag for a boolean property stored as a 0/1 metric.
  void require(const std::string& name, const std::string& metric_name);
  bool passed() const;
};

Report run_free_baseline(const ScenarioConfig& config);
Report run_heisenberg_gauge(const ScenarioConfig& config);
Report run_schrodinger_gauge_scan(const ScenarioConfig& config);
Report run_heisenberg_energy_scan(const ScenarioConfig& config);
Report run_picture_equivalence(const ScenarioConfig& config);

/// Least-squares line through (x, y); returns {slope, intercept}.
std::pair<double, double> linear_fit(const std::vector<double>& x, const std::vector<double>& y);

/// First f whose |rel_dev| exceeds `threshold`; +infinity when none does.
double departure_scale(const std::vector<double>& f, const std::vector<double>& rel_dev, double threshold = 0.1);

/// Uniform doubles in [0, 1) taken from the top 53 bits of std::mt19937_64,
/// identical on every standard library.
class UniformStream {
 public:
  explicit UniformStream(std::uint64_t seed) : engine_(seed) {}
  double next() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double next(double lo, double hi) { return lo + (hi - lo) * next(); }

 private:
  std::mt19937_64 engine_;
};

/// Random hermitian band-limited drive with wave indices in {-1, 0, 1} along
/// the grid axes and a sinusoidal envelope.
PotentialSpec random_drive(const MomentumGrid& grid, UniformStream& rng, double strength);

}  // namespace diracsea
