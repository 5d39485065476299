#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diracsea/onebody.hpp"

using namespace diracsea;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI{0.0, 1.0};

GaugeFunction cosine_chi(double amplitude, double t_final) {
  GaugeFunction chi;
  chi.chi = {{{0.0, 0.0, 1.0}, amplitude}, {{0.0, 0.0, -1.0}, amplitude}};
  chi.envelope = Envelope::ramp(std::numbers::pi / t_final, t_final);
  return chi;
}

double max_abs(const std::vector<VectorMode>& modes) {
  double out = 0.0;
  for (const auto& m : modes)
    for (const auto& a : m.amplitude) out = std::max(out, std::abs(a));
  return out;
}

}  // namespace

TEST_SUITE("onebody") {
  TEST_CASE("hermitian construction") {
    Matrix m(2, 2);
    m << 1.0, kI, -kI, 2.0;
    CHECK(make_hermitian(m).hermitian);
    m(0, 1) = 1.0;
    CHECK_THROWS_AS(make_hermitian(m), std::invalid_argument);
    CHECK_THROWS_AS(make_hermitian(Matrix::Zero(2, 3)), std::invalid_argument);
  }

  TEST_CASE("ramp envelope") {
    const double tf = 1.3;
    const auto g = Envelope::ramp(std::numbers::pi / tf, tf);
    CHECK(std::abs(g(0.0)) < 1e-15);
    CHECK(std::abs(g.derivative(0.0)) < 1e-15);
    CHECK(g(tf) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(g(0.5 * tf) == doctest::Approx(0.5).epsilon(1e-14));
    const double h = 1e-5;
    for (double t : {0.2, 0.7, 1.1}) {
      CHECK(g.derivative(t) == doctest::Approx((g(t + h) - g(t - h)) / (2 * h)).epsilon(1e-8));
      CHECK(g.derivative(t, 2) == doctest::Approx((g.derivative(t + h) - g.derivative(t - h)) / (2 * h)).epsilon(1e-8));
      CHECK(g.differentiated()(t) == g.derivative(t));
    }
    CHECK_THROWS_AS(Envelope::ramp(kTwoPi, 1.0), std::invalid_argument);
  }

  TEST_CASE("free hamiltonian is diagonal") {
    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 1), 1.0);
    const auto h0 = h0_matrix(cat);
    CHECK(h0.hermitian);
    for (std::size_t i = 0; i < cat.size(); ++i) {
      const auto& m = cat.mode(i);
      CHECK(h0.entries(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)).real() ==
            doctest::Approx(m.label.lambda * std::sqrt(1.0 + m.p[2] * m.p[2])));
    }
    CHECK((h0.entries - Matrix(h0.entries.diagonal().asDiagonal())).norm() == 0.0);
  }

  TEST_CASE("uniform scalar potential shifts by e a0") {
    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 1), 1.0);
    PotentialSpec pot;
    pot.terms.push_back({Envelope::constant(), {{{0.0, 0.0, 0.0}, 0.3}}, {}});
    const auto v = interaction_matrix(cat, pot, 0.0, -2.0);
    const Matrix expected = -0.6 * Matrix::Identity(12, 12);
    CHECK((v.entries - expected).norm() < 1e-14);
  }

  TEST_CASE("multiplication operator matches real-space overlap") {
    const MomentumGrid grid(kTwoPi, 1, 1);
    const auto cat = build_catalog(grid, 1.0);
    GaugeFunction chi = cosine_chi(0.25, 1.0);
    chi.envelope = Envelope::constant();
    const auto x = chi_matrix(cat, chi, 0.0);

    // <a| chi |b> = (1/L) int u_a^dagger u_b exp(i (p_b - p_a) z) chi(z) dz by quadrature.
    const int n = 64;
    double worst = 0.0;
    for (std::size_t a = 0; a < cat.size(); ++a) {
      for (std::size_t b = 0; b < cat.size(); ++b) {
        const auto& ma = cat.mode(a);
        const auto& mb = cat.mode(b);
        cplx sum = 0.0;
        for (int j = 0; j < n; ++j) {
          const double z = kTwoPi * j / n;
          sum += std::exp(kI * (mb.p[2] - ma.p[2]) * z) * chi.value({0.0, 0.0, z}, 0.0);
        }
        const cplx expected = ma.u.dot(mb.u) * sum / static_cast<double>(n);
        worst = std::max(worst, std::abs(x.entries(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) - expected));
      }
    }
    CHECK(worst < 1e-14);
  }

  TEST_CASE("reality and band checks") {
    PotentialSpec pot;
    pot.terms.push_back({Envelope::constant(), {{{0.0, 0.0, 1.0}, cplx(0.1, 0.2)}}, {}});
    CHECK_THROWS_AS(pot.validate(), std::invalid_argument);
    pot.terms[0].a0.push_back({{0.0, 0.0, -1.0}, cplx(0.1, -0.2)});
    CHECK_NOTHROW(pot.validate());
    pot.k_band = 0.5;
    CHECK_THROWS_AS(pot.validate(), std::invalid_argument);

    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 1), 1.0);
    PotentialSpec wide;
    wide.terms.push_back({Envelope::constant(), {{{0.0, 0.0, 3.0}, 0.1}, {{0.0, 0.0, -3.0}, 0.1}}, {}});
    CHECK_THROWS_AS(interaction_matrix(cat, wide, 0.0), std::invalid_argument);

    GaugeFunction chi = cosine_chi(0.1, 1.0);
    chi.envelope = Envelope::constant();
    CHECK_THROWS_AS(chi.require_initial_conditions(), std::invalid_argument);
    CHECK_NOTHROW(cosine_chi(0.1, 1.0).require_initial_conditions());
  }

  TEST_CASE("unitary exponential") {
    Matrix h(2, 2);
    h << 0.0, 1.0, 1.0, 0.0;
    const double t = 0.7;
    const Matrix u = unitary_exp(h, t);
    Matrix expected(2, 2);
    expected << std::cos(t), -kI * std::sin(t), -kI * std::sin(t), std::cos(t);
    CHECK((u - expected).norm() < 1e-14);
    CHECK(unitarity_defect(u) < 1e-14);
  }

  TEST_CASE("static generator propagates exactly") {
    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 1), 1.0);
    PotentialSpec pot;
    pot.terms.push_back({Envelope::constant(), {{{0.0, 0.0, 1.0}, 0.2}, {{0.0, 0.0, -1.0}, 0.2}}, {}});
    const auto gen = dirac_generator(cat, pot);
    const auto prop = propagate(gen, 0.0, 1.0, 7);
    REQUIRE(prop.u.size() == 8);
    CHECK(prop.times.back() == doctest::Approx(1.0));
    CHECK((prop.u.back() - unitary_exp(gen(0.0), 1.0)).norm() < 1e-12);
    CHECK(prop.u.front().isIdentity(0.0));
  }

  TEST_CASE("midpoint stepping is second order") {
    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 1), 1.0);
    PotentialSpec pot;
    pot.terms.push_back({Envelope::sinusoid(2.0, 0.3), {}, {{{0.0, 0.0, 1.0}, {0.0, 0.0, 0.4}}, {{0.0, 0.0, -1.0}, {0.0, 0.0, 0.4}}}});
    const auto gen = dirac_generator(cat, pot);
    const Matrix ref = propagate(gen, 0.0, 1.0, 1600).u.back();
    const double e1 = (propagate(gen, 0.0, 1.0, 25).u.back() - ref).norm();
    const double e2 = (propagate(gen, 0.0, 1.0, 50).u.back() - ref).norm();
    CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.05));
  }

  TEST_CASE("pure gauge potential carries no field") {
    const auto chi = cosine_chi(0.3, 1.0);
    const auto pot = gauge_transform(PotentialSpec{}, chi);
    REQUIRE(pot.terms.size() == 2);
    for (double t : {0.0, 0.3, 0.8, 1.0}) {
      const auto f = field_coefficients(pot, t);
      CHECK(max_abs(f.electric) < 1e-15);
      CHECK(max_abs(f.magnetic) < 1e-15);
    }

    PotentialSpec narrow;
    narrow.k_band = 0.5;
    CHECK_THROWS_AS(gauge_transform(narrow, chi), std::invalid_argument);
  }

  TEST_CASE("nonzero field for a non-gauge potential") {
    PotentialSpec pot;
    pot.terms.push_back({Envelope::sinusoid(1.0, 0.0), {}, {{{0.0, 0.0, 1.0}, {0.1, 0.0, 0.0}}, {{0.0, 0.0, -1.0}, {0.1, 0.0, 0.0}}}});
    const auto f = field_coefficients(pot, 0.5);
    CHECK(max_abs(f.electric) == doctest::Approx(0.1 * std::cos(0.5)));
    CHECK(max_abs(f.magnetic) == doctest::Approx(0.1 * std::sin(0.5)));
  }

  TEST_CASE("gauge identity holds inside the cutoff") {
    const auto chi = cosine_chi(0.2, 1.0);
    const auto cat2 = build_catalog(MomentumGrid(kTwoPi, 1, 2), 1.0);
    const auto r2 = gauge_identity_residual(cat2, chi, 1.0);
    CHECK(r2.boundary > 1e-2);
    CHECK(r2.interior < r2.boundary);

    double previous = r2.interior;
    for (int n : {3, 4, 5}) {
      const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, n), 1.0);
      const double r = gauge_identity_residual(cat, chi, 1.0, 1.0, 1).interior;
      CHECK(r < previous);
      previous = r;
    }
    CHECK(previous < 1e-6);
    CHECK(gauge_identity_residual(cat2, chi, 0.0).boundary < 1e-15);
  }

  TEST_CASE("interior rows and band index") {
    const MomentumGrid grid(kTwoPi, 1, 3);
    const auto cat = build_catalog(grid, 1.0);
    CHECK(interior_rows(cat, 0).size() == cat.size());
    CHECK(interior_rows(cat, 1).size() == 20);
    CHECK(interior_rows(cat, 3).size() == 4);
    GaugeFunction chi;
    chi.chi = {{{0.0, 0.0, 2.0}, 0.1}, {{0.0, 0.0, -2.0}, 0.1}};
    CHECK(band_index(chi, grid) == 2);
  }
}
