#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diracsea/fock.hpp"

using namespace diracsea;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI{0.0, 1.0};

Matrix random_hermitian(int n, unsigned seed) {
  std::srand(seed);
  Matrix a = Matrix::Random(n, n);
  return 0.5 * (a + a.adjoint());
}

}  // namespace

TEST_SUITE("fock") {
  TEST_CASE("canonical anticommutation relations") {
    for (std::size_t m : {2u, 4u, 8u, 12u}) {
      const auto r = car_residual(build_ladders(m));
      CHECK(r.anticommutator <= 1e-12);
      CHECK(r.pair <= 1e-12);
    }
  }

  TEST_CASE("dropping the sign string breaks the relations") {
    const auto r = car_residual(build_ladders(4, SignConvention::none));
    CHECK(std::max(r.anticommutator, r.pair) > 0.5);
  }

  TEST_CASE("explicit two-mode ladder matrices") {
    // Bit i <-> mode i, sign string over the lower modes.
    const auto l = build_ladders(2);
    const Matrix c0 = Matrix(l.c(0));
    const Matrix c1 = Matrix(l.c(1));
    Matrix e0 = Matrix::Zero(4, 4), e1 = Matrix::Zero(4, 4);
    e0(0, 1) = 1.0;
    e0(2, 3) = 1.0;
    e1(0, 2) = 1.0;
    e1(1, 3) = -1.0;
    CHECK((c0 - e0).norm() == 0.0);
    CHECK((c1 - e1).norm() == 0.0);
  }

  TEST_CASE("cap and role checks") {
    CHECK_THROWS_AS(build_ladders(16), std::invalid_argument);
    CHECK_NOTHROW(build_ladders(16, SignConvention::jordan_wigner, 16));
    const auto l = build_ladders(4);
    CHECK_THROWS_AS(l.b(3), std::invalid_argument);
    CHECK_THROWS_AS(l.d(0), std::invalid_argument);
    CHECK((Matrix(l.d(3)) - Matrix(l.c_dag(3))).norm() == 0.0);
  }

  TEST_CASE("vacuum is the filled sea") {
    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 0), 1.0);
    const auto l = build_ladders(cat);
    CHECK(vacuum_bits(l) == 0b1100u);
    const auto vac = vacuum_state(l);
    CHECK(std::abs(vac.amplitudes[12] - cplx(1.0)) == 0.0);
    for (std::size_t i = 0; i < 2; ++i) CHECK((Matrix(l.b(i)) * vac.amplitudes).norm() == 0.0);
    for (std::size_t i = 2; i < 4; ++i) CHECK((Matrix(l.d(i)) * vac.amplitudes).norm() == 0.0);
  }

  TEST_CASE("free spectrum at the smallest cutoff") {
    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 0), 1.0);
    const auto s = h0_spectrum_check(build_ladders(cat), cat);
    CHECK(s.vacuum_energy == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(s.expected_vacuum == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(s.min_eigenvalue == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(s.argmin_is_vacuum);
    CHECK(s.gap == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(s.max_offdiagonal == 0.0);
    CHECK(s.max_diagonal_mismatch <= 1e-12);
  }

  TEST_CASE("free spectrum on the two-momentum window") {
    const MomentumGrid g(kTwoPi, 1, 1);
    const std::vector<IVec3> window{{0, 0, 0}, {0, 0, 1}};
    const auto cat = build_catalog(g, 1.0, window);
    const auto s = h0_spectrum_check(build_ladders(cat), cat);
    CHECK(s.vacuum_energy == doctest::Approx(-2.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-14));
    CHECK(s.argmin_is_vacuum);
    CHECK(s.gap == doctest::Approx(1.0).epsilon(1e-12));
  }

  TEST_CASE("quantized commutator identity") {
    const auto l = build_ladders(6);
    for (unsigned seed = 1; seed <= 5; ++seed) CHECK(commutator_identity_check(random_hermitian(6, seed), l) <= 1e-12);
    CHECK_THROWS_AS(quantize(random_hermitian(5, 1), l), std::invalid_argument);
  }

  TEST_CASE("quantized bilinear matches sum of occupations") {
    const auto l = build_ladders(4);
    Matrix h = Matrix::Zero(4, 4);
    h.diagonal() << 1.0, 2.0, 4.0, 8.0;
    const auto q = quantize(h, l);
    for (Eigen::Index s = 0; s < 16; ++s) {
      double expected = 0.0;
      for (int i = 0; i < 4; ++i)
        if (s & (Eigen::Index{1} << i)) expected += h(i, i).real();
      CHECK(std::abs(q.matrix.coeff(s, s) - expected) < 1e-15);
    }
  }

  TEST_CASE("two-mode state and its correlations") {
    const auto cat = build_catalog(MomentumGrid(kTwoPi, 1, 0), 1.0);
    const auto l = build_ladders(cat);
    const auto psi = omega0_state(l, 0, 1);
    CHECK(std::abs(psi.amplitudes.norm() - 1.0) < 1e-15);
    const Matrix c = correlation_from_state(psi, l);
    Matrix expected = Matrix::Zero(4, 4);
    expected.block(0, 0, 2, 2).setConstant(0.5);
    expected(2, 2) = 1.0;
    expected(3, 3) = 1.0;
    CHECK((c - expected).norm() < 1e-15);
    CHECK_THROWS_AS(omega0_state(l, 0, 0), std::invalid_argument);
    CHECK_THROWS_AS(omega0_state(l, 0, 2), std::invalid_argument);
  }

  TEST_CASE("normalization is enforced") {
    StateVector v = StateVector::Zero(4);
    v[0] = 0.9;
    CHECK_THROWS_AS(FockState::normalized(v), std::invalid_argument);
  }

  TEST_CASE("free evolution follows explicit phases") {
    const MomentumGrid g(kTwoPi, 1, 1);
    const std::vector<IVec3> window{{0, 0, 0}, {0, 0, 1}};
    const auto cat = build_catalog(g, 1.0, window);
    const auto l = build_ladders(cat);
    const std::size_t i1 = cat.index({1, 1, {0, 0, 0}});
    const std::size_t i2 = cat.index({1, 1, {0, 0, 1}});
    const auto psi0 = omega0_state(l, i1, i2);
    const auto h0 = quantize(h0_matrix(cat), l);
    const auto traj = evolve_schrodinger(psi0, [&](double) { return h0; }, 0.0, 2.0, 10);

    const double vac = -cat.sea_energy_sum();
    const double e1 = 1.0, e2 = std::sqrt(2.0);
    const auto vb = vacuum_bits(l);
    const auto s1 = static_cast<Eigen::Index>(vb | (std::uint64_t{1} << i1));
    const auto s2 = static_cast<Eigen::Index>(vb | (std::uint64_t{1} << i2));
    for (std::size_t n = 0; n < traj.times.size(); ++n) {
      const double t = traj.times[n];
      StateVector expected = StateVector::Zero(psi0.amplitudes.size());
      expected[s1] = psi0.amplitudes[s1] * std::exp(-kI * (vac + e1) * t);
      expected[s2] = psi0.amplitudes[s2] * std::exp(-kI * (vac + e2) * t);
      CHECK((traj.states[n].amplitudes - expected).norm() < 1e-12);
    }
  }

  TEST_CASE("taylor exponential matches dense exponential") {
    const auto l = build_ladders(4);
    const Matrix h = random_hermitian(4, 9);
    const auto q = quantize(h, l);
    StateVector psi = StateVector::Random(16);
    psi.normalize();
    const Matrix dense = unitary_exp(Matrix(q.matrix), 0.37);
    CHECK((apply_exponential(q.matrix, 0.37, psi) - dense * psi).norm() < 1e-12);
  }

  TEST_CASE("non-hermitian generator is rejected") {
    const auto l = build_ladders(2);
    ManyBodyOperator op{SparseMatrix(4, 4), false};
    CHECK_THROWS_AS(evolve_schrodinger(vacuum_state(l), [&](double) { return op; }, 0.0, 1.0, 2),
                    std::invalid_argument);
  }
}
