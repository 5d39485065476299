#include "diracsea/check.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "diracsea/experiments.hpp"
#include "diracsea/io.hpp"
#include "diracsea/observables.hpp"

namespace diracsea {

namespace {

SuiteResult suite(const std::string& name, double residual, double tolerance, bool extra = true) {
  return {name, residual, tolerance, extra && residual <= tolerance};
}

Matrix random_hermitian(std::size_t M, UniformStream& rng) {
  Matrix a(static_cast<Eigen::Index>(M), static_cast<Eigen::Index>(M));
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = cplx(rng.next(-1.0, 1.0), rng.next(-1.0, 1.0));
  return (a + a.adjoint()) / 2.0;
}

}  // namespace

std::vector<SuiteResult> run_check_suites(const CheckOptions& options) {
  std::vector<SuiteResult> out;
  const MomentumGrid grid(2.0 * std::numbers::pi, 1, 1);
  const BasisCatalog full = build_catalog(grid, 1.0);
  const std::vector<IVec3> window{{0, 0, 0}, {0, 0, 1}};
  const BasisCatalog small = build_catalog(grid, 1.0, window);

  double car = 0.0;
  for (std::size_t M : {std::size_t{2}, std::size_t{4}, small.size(), full.size()}) {
    const auto res = car_residual(build_ladders(M, options.convention));
    car = std::max({car, res.anticommutator, res.pair});
  }
  out.push_back(suite("car", car, 1e-12));

  const BasisCatalog rest = build_catalog(MomentumGrid(2.0 * std::numbers::pi, 1, 0), 1.0);
  double spectrum = 0.0;
  bool ordered = true;
  for (const BasisCatalog* cat : {&rest, &small}) {
    const auto rep = h0_spectrum_check(build_ladders(*cat, options.convention), *cat);
    spectrum = std::max({spectrum, std::abs(rep.min_eigenvalue - rep.expected_vacuum),
                         std::abs(rep.vacuum_energy - rep.expected_vacuum), rep.max_offdiagonal,
                         rep.max_diagonal_mismatch});
    ordered = ordered && rep.argmin_is_vacuum && rep.gap >= rep.lightest_energy - 1e-10;
  }
  out.push_back(suite("spectrum", spectrum, 1e-10, ordered));

  UniformStream rng(options.seed);
  const LadderSet six = build_ladders(6, options.convention);
  double comm = 0.0;
  for (int k = 0; k < 20; ++k) comm = std::max(comm, commutator_identity_check(random_hermitian(6, rng), six));
  out.push_back(suite("commutator", comm, 1e-12));

  const BasisCatalog cat = build_catalog(MomentumGrid(2.0 * std::numbers::pi, 1, 2), 1.0);
  const auto& m1 = cat.mode(cat.index({1, 1, {0, 0, 0}}));
  const auto& m2 = cat.mode(cat.index({1, 1, {0, 0, 1}}));
  const double V = cat.grid().volume();
  double oracle = 0.0;
  for (const auto& x : make_spatial_grid(cat.grid()).points)
    for (int n = 0; n <= 20; ++n) {
      const double t = 0.05 * n;
      oracle = std::max(oracle, std::abs(divj_oracle(x, t, m1, m2, 1.0, V) + drho_dt_oracle(x, t, m1, m2, 1.0, V)));
    }
  out.push_back(suite("oracle", oracle, 1e-10));

  ScenarioConfig config;
  config.seed = options.seed;
  config.drives = 2;
  config.steps = 100;
  const Report eq = run_picture_equivalence(config);
  out.push_back(suite("equivalence", eq.metric("max_deviation"), 1e-8));
  return out;
}

void print_check_table(const std::vector<SuiteResult>& results, std::ostream& out) {
  char line[128];
  std::snprintf(line, sizeof line, "%-12s %-24s %-12s %s\n", "suite", "max_residual", "tolerance", "status");
  out << line;
  for (const auto& r : results) {
    std::snprintf(line, sizeof line, "%-12s %-24s %-12.1e %s\n", r.name.c_str(), format_double(r.residual).c_str(),
                  r.tolerance, r.passed ? "PASS" : "FAIL");
    out << line;
  }
}

}  // namespace diracsea
