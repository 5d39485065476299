#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diracsea/observables.hpp"

using namespace diracsea;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI{0.0, 1.0};

struct TwoMode {
  BasisCatalog catalog;
  std::size_t i1;
  std::size_t i2;
};

TwoMode two_mode(int n_max, double box = kTwoPi) {
  auto cat = build_catalog(MomentumGrid(box, 1, n_max), 1.0);
  const auto i1 = cat.index({1, 1, {0, 0, 0}});
  const auto i2 = cat.index({1, 1, {0, 0, 1}});
  return {std::move(cat), i1, i2};
}

// Excess density of (b_1^dagger + b_2^dagger)|0>/sqrt(2) written from the
// plane waves directly: |phi_1 e^{-iE_1 t} + phi_2 e^{-iE_2 t}|^2 / 2.
double excess_density(const SpinorMode& m1, const SpinorMode& m2, double z, double t, double volume) {
  const Spinor psi = m1.u * std::exp(kI * (m1.p[2] * z - m1.energy * t)) + m2.u * std::exp(kI * (m2.p[2] * z - m2.energy * t));
  return psi.squaredNorm() / (2.0 * volume);
}

Vec3 excess_current(const SpinorMode& m1, const SpinorMode& m2, double z, double t, double volume) {
  const Spinor psi = m1.u * std::exp(kI * (m1.p[2] * z - m1.energy * t)) + m2.u * std::exp(kI * (m2.p[2] * z - m2.energy * t));
  Vec3 j{};
  for (int a = 0; a < 3; ++a) j[static_cast<std::size_t>(a)] = psi.dot(alpha(a) * psi).real() / (2.0 * volume);
  return j;
}

CorrelationMatrix evolved(const TwoMode& s, double t) {
  const Matrix u = unitary_exp(h0_matrix(s.catalog).entries, t);
  return evolve_correlation(omega0_correlation(s.catalog, s.i1, s.i2), u);
}

}  // namespace

TEST_SUITE("observables") {
  TEST_CASE("spatial grid") {
    const MomentumGrid g1(kTwoPi, 1, 2);
    CHECK(make_spatial_grid(g1).points.size() == 9);
    CHECK(make_spatial_grid(g1, 4).points[1][2] == doctest::Approx(kTwoPi / 4));
    CHECK(make_spatial_grid(MomentumGrid(kTwoPi, 3, 1), 3).points.size() == 27);
  }

  TEST_CASE("vacuum density is the uniform background") {
    const auto cat = build_catalog(MomentumGrid(3.0, 1, 2), 1.0);
    const auto vac = vacuum_correlation(cat);
    const double expected = 0.5 * static_cast<double>(cat.size()) / 3.0;
    for (double z : {0.0, 0.4, 2.9}) {
      CHECK(charge_density(vac, cat, {0.0, 0.0, z}) == doctest::Approx(expected).epsilon(1e-13));
      const Vec3 j = current_density(vac, cat, {0.0, 0.0, z});
      CHECK(std::abs(j[2]) < 1e-14);
    }
    CHECK_THROWS_AS(charge_density(vac, cat, {0.0, 0.0, 3.0}), std::invalid_argument);
    CHECK_THROWS_AS(charge_density(vac, cat, {0.1, 0.0, 1.0}), std::invalid_argument);
  }

  TEST_CASE("two-mode density and current against plane waves") {
    const auto s = two_mode(2);
    const double V = s.catalog.grid().volume();
    const double background = 0.5 * static_cast<double>(s.catalog.size()) / V;
    const auto& m1 = s.catalog.mode(s.i1);
    const auto& m2 = s.catalog.mode(s.i2);
    for (double t : {0.0, 0.45, 1.0}) {
      const auto c = evolved(s, t);
      for (double z : {0.0, 1.1, 4.0}) {
        CHECK(charge_density(c, s.catalog, {0.0, 0.0, z}, 2.0) ==
              doctest::Approx(2.0 * (background + excess_density(m1, m2, z, t, V))).epsilon(1e-12));
        const Vec3 j = current_density(c, s.catalog, {0.0, 0.0, z});
        const Vec3 expected = excess_current(m1, m2, z, t, V);
        for (int a = 0; a < 3; ++a) CHECK(std::abs(j[static_cast<std::size_t>(a)] - expected[static_cast<std::size_t>(a)]) < 1e-13);
      }
    }
  }

  TEST_CASE("Fock and correlation densities agree") {
    const std::vector<IVec3> window{{0, 0, 0}, {0, 0, 1}};
    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 1), 1.0, window);
    const auto l = build_ladders(cat);
    const auto i1 = cat.index({1, 1, {0, 0, 0}});
    const auto i2 = cat.index({1, 1, {0, 0, 1}});
    const auto psi = omega0_state(l, i1, i2);
    const auto c = omega0_correlation(cat, i1, i2);
    for (double z : {0.0, 2.0, 5.0}) {
      CHECK(charge_density(psi, l, cat, {0.0, 0.0, z}) == doctest::Approx(charge_density(c, cat, {0.0, 0.0, z})).epsilon(1e-13));
      CHECK(current_density(psi, l, cat, {0.0, 0.0, z})[2] ==
            doctest::Approx(current_density(c, cat, {0.0, 0.0, z})[2]).epsilon(1e-13));
    }
  }

  TEST_CASE("total charge by quadrature") {
    const auto s = two_mode(2);
    const auto c = evolved(s, 0.7);
    const int n = 32;
    double total = 0.0;
    for (int j = 0; j < n; ++j) total += charge_density(c, s.catalog, {0.0, 0.0, kTwoPi * j / n}) * kTwoPi / n;
    CHECK(total == doctest::Approx(c.C.trace().real()).epsilon(1e-13));
    CHECK(total == doctest::Approx(0.5 * static_cast<double>(s.catalog.size()) + 1.0).epsilon(1e-13));
  }

  TEST_CASE("oracles against finite differences") {
    const auto s = two_mode(2);
    const double V = s.catalog.grid().volume();
    const auto& m1 = s.catalog.mode(s.i1);
    const auto& m2 = s.catalog.mode(s.i2);
    const double h = 1e-5;
    for (double t : {0.1, 0.6}) {
      for (double z : {0.3, 2.2, 5.0}) {
        const double fd = (excess_density(m1, m2, z, t + h, V) - excess_density(m1, m2, z, t - h, V)) / (2 * h);
        CHECK(drho_dt_oracle({0.0, 0.0, z}, t, m1, m2, 1.0, V) == doctest::Approx(fd).epsilon(1e-7));
        const double div = (excess_current(m1, m2, z + h, t, V)[2] - excess_current(m1, m2, z - h, t, V)[2]) / (2 * h);
        CHECK(divj_oracle({0.0, 0.0, z}, t, m1, m2, 1.0, V) == doctest::Approx(div).epsilon(1e-7));
        CHECK(drho_dt_oracle({0.0, 0.0, z}, t, m1, m2, 1.0, V) ==
              doctest::Approx(-divj_oracle({0.0, 0.0, z}, t, m1, m2, 1.0, V)).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("oracle profiles evaluate to the oracles") {
    const auto s = two_mode(2);
    const double V = s.catalog.grid().volume();
    const auto& m1 = s.catalog.mode(s.i1);
    const auto& m2 = s.catalog.mode(s.i2);
    const auto d = drho_dt_profile(0.8, m1, m2, 1.0, V);
    const auto j = divj_profile(0.8, m1, m2, 1.0, V);
    for (double z : {0.0, 1.7}) {
      CHECK(evaluate(d, {0.0, 0.0, z}) == doctest::Approx(drho_dt_oracle({0.0, 0.0, z}, 0.8, m1, m2, 1.0, V)));
      CHECK(evaluate(j, {0.0, 0.0, z}) == doctest::Approx(divj_oracle({0.0, 0.0, z}, 0.8, m1, m2, 1.0, V)));
    }
  }

  TEST_CASE("degenerate oracle") {
    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 1), 1.0);
    const auto& up = cat.mode(cat.index({1, 1, {0, 0, 1}}));
    const auto& down = cat.mode(cat.index({1, -1, {0, 0, 1}}));
    const auto& rest = cat.mode(cat.index({1, 1, {0, 0, 0}}));
    CHECK(oracle_is_degenerate(up, down));
    CHECK_FALSE(oracle_is_degenerate(up, rest));
    const double V = cat.grid().volume();
    CHECK(std::abs(drho_dt_oracle({0.0, 0.0, 1.0}, 0.5, up, down, 1.0, V)) < 1e-15);
  }

  TEST_CASE("exact divergence of band-limited fields") {
    std::vector<VectorMode> field{{{0.0, 0.0, 2.0}, {0.0, 0.0, cplx(0.0, 0.5)}},
                                  {{0.0, 0.0, -2.0}, {0.0, 0.0, cplx(0.0, -0.5)}}};
    // J_z = -sin(2z), so div J = -2 cos(2z).
    const auto div = divergence(field);
    for (double z : {0.0, 0.4, 1.3}) {
      CHECK(evaluate(field, {0.0, 0.0, z})[2] == doctest::Approx(-std::sin(2 * z)));
      CHECK(evaluate(div, {0.0, 0.0, z}) == doctest::Approx(-2.0 * std::cos(2 * z)));
    }
  }

  TEST_CASE("continuity on the freely evolving state") {
    const auto s = two_mode(2);
    const auto points = make_spatial_grid(s.catalog.grid());
    FieldSeries series;
    series.points = points.points;
    const Matrix step = unitary_exp(h0_matrix(s.catalog).entries, 0.001);
    auto c = omega0_correlation(s.catalog, s.i1, s.i2);
    for (int n = 0; n <= 20; ++n) {
      series.push(0.001 * n, sample_fields(c, s.catalog, points));
      c = evolve_correlation(c, step);
    }
    CHECK(continuity_residual(series) < 1e-6);

    FieldSeries short_series;
    short_series.points = points.points;
    short_series.push(0.0, sample_fields(c, s.catalog, points));
    CHECK_THROWS_AS(continuity_residual(short_series), std::invalid_argument);
    CHECK_THROWS_AS(short_series.push(0.0, sample_fields(c, s.catalog, points)), std::invalid_argument);
  }

  TEST_CASE("fourier pairing against quadrature") {
    const MomentumGrid g(3.0, 1, 2);
    const double k = kTwoPi / 3.0;
    std::vector<ScalarMode> a{{{0.0, 0.0, 0.0}, 0.4}, {{0.0, 0.0, k}, cplx(0.2, 0.1)}, {{0.0, 0.0, -k}, cplx(0.2, -0.1)}};
    std::vector<ScalarMode> b{{{0.0, 0.0, k}, cplx(-0.3, 0.5)}, {{0.0, 0.0, -k}, cplx(-0.3, -0.5)},
                              {{0.0, 0.0, 2 * k}, 0.7}, {{0.0, 0.0, -2 * k}, 0.7}};
    const int n = 40;
    double quad = 0.0;
    for (int j = 0; j < n; ++j) {
      const Vec3 x{0.0, 0.0, 3.0 * j / n};
      quad += evaluate(a, x) * evaluate(b, x) * 3.0 / n;
    }
    CHECK(fourier_pairing(g, a, b) == doctest::Approx(quad).epsilon(1e-13));
    CHECK(energy_identity_rhs(g, a, b, 1.5) == doctest::Approx(1.5 + quad).epsilon(1e-13));
  }

  TEST_CASE("free energies in both pictures") {
    const auto s = two_mode(2);
    const double expected = -s.catalog.sea_energy_sum() + 0.5 * (1.0 + std::sqrt(2.0));
    CHECK(delta_xi(s.catalog.mode(s.i1), s.catalog.mode(s.i2)) == doctest::Approx(0.5 * (1.0 + std::sqrt(2.0))));
    const auto c0 = omega0_correlation(s.catalog, s.i1, s.i2);
    const Matrix u = unitary_exp(h0_matrix(s.catalog).entries, 1.0);
    CHECK(free_energy_schrodinger(c0, s.catalog) == doctest::Approx(expected).epsilon(1e-14));
    CHECK(free_energy_heisenberg(c0, u, s.catalog) == doctest::Approx(expected).epsilon(1e-13));
    CHECK_THROWS_AS(free_energy_heisenberg(c0, 2.0 * u, s.catalog), std::invalid_argument);
  }
}
