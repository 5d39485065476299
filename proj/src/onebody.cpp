#include "diracsea/onebody.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace diracsea {

namespace {

constexpr cplx kI{0.0, 1.0};

Vec3 negate(const Vec3& k) { return {-k[0], -k[1], -k[2]}; }

bool same_k(const Vec3& a, const Vec3& b) {
  for (std::size_t i = 0; i < 3; ++i)
    if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) return false;
  return true;
}

template <typename Mode, typename Conj>
void check_reality(const std::vector<Mode>& modes, Conj matches_conjugate, const char* what) {
  for (const auto& m : modes) {
    const auto partner = std::find_if(modes.begin(), modes.end(),
                                      [&](const Mode& o) { return same_k(o.k, negate(m.k)); });
    if (partner == modes.end() || !matches_conjugate(m, *partner))
      throw std::invalid_argument(std::string(what) + ": amplitude(-k) must equal conj(amplitude(k))");
  }
}

void check_band(const Vec3& k, double band, const char* what) {
  for (double c : k)
    if (std::abs(c) > band * (1.0 + 1e-12)) throw std::invalid_argument(std::string(what) + ": wave vector exceeds band limit");
}

void check_scalar_modes(const std::vector<ScalarMode>& modes, double band, const char* what) {
  check_reality(modes, [](const ScalarMode& a, const ScalarMode& b) {
    return std::abs(a.amplitude - std::conj(b.amplitude)) <= 1e-12 * std::max(1.0, std::abs(a.amplitude));
  }, what);
  for (const auto& m : modes) check_band(m.k, band, what);
}

void check_vector_modes(const std::vector<VectorMode>& modes, double band, const char* what) {
  check_reality(modes, [](const VectorMode& a, const VectorMode& b) {
    for (std::size_t i = 0; i < 3; ++i)
      if (std::abs(a.amplitude[i] - std::conj(b.amplitude[i])) > 1e-12 * std::max(1.0, std::abs(a.amplitude[i])))
        return false;
    return true;
  }, what);
  for (const auto& m : modes) check_band(m.k, band, what);
}

}  // namespace

OneBodyOperator make_hermitian(Matrix entries) {
  if (entries.rows() != entries.cols()) throw std::invalid_argument("make_hermitian: matrix is not square");
  if (hermiticity_defect(entries) > 1e-12) throw std::invalid_argument("make_hermitian: matrix is not hermitian");
  return {std::move(entries), true};
}

double hermiticity_defect(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double unitarity_defect(const Matrix& u) {
  if (u.size() == 0) return 0.0;
  return (u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
}

Envelope Envelope::constant() {
  return Envelope([](double, int order) { return order == 0 ? 1.0 : 0.0; });
}

Envelope Envelope::ramp(double omega, double t_final) {
  const double norm = 1.0 - std::cos(omega * t_final);
  if (std::abs(norm) < 1e-12) throw std::invalid_argument("Envelope::ramp: cos(omega t_final) = 1");
  return Envelope([omega, norm](double t, int order) {
    // d^n/dt^n cos(w t) = w^n cos(w t + n pi / 2)
    const double c = std::pow(omega, order) * std::cos(omega * t + order * std::numbers::pi / 2.0);
    return order == 0 ? (1.0 - c) / norm : -c / norm;
  });
}

Envelope Envelope::sinusoid(double omega, double phase) {
  return Envelope([omega, phase](double t, int order) {
    return std::pow(omega, order) * std::sin(omega * t + phase + order * std::numbers::pi / 2.0);
  });
}

Envelope Envelope::differentiated() const {
  Profile p = profile_;
  return Envelope([p](double t, int order) { return p(t, order + 1); });
}

void PotentialSpec::validate() const {
  for (const auto& term : terms) {
    check_scalar_modes(term.a0, k_band, "PotentialSpec a0");
    check_vector_modes(term.a, k_band, "PotentialSpec a");
  }
}

double GaugeFunction::value(const Vec3& x, double t) const {
  cplx sum = 0.0;
  for (const auto& m : chi) sum += m.amplitude * std::exp(kI * (m.k[0] * x[0] + m.k[1] * x[1] + m.k[2] * x[2]));
  return sum.real() * envelope(t);
}

void GaugeFunction::validate() const { check_scalar_modes(chi, k_band, "GaugeFunction"); }

void GaugeFunction::require_initial_conditions() const {
  if (std::abs(envelope(0.0)) > 1e-12 || std::abs(envelope.derivative(0.0)) > 1e-12)
    throw std::invalid_argument("GaugeFunction: envelope must satisfy g(0) = 0 and g'(0) = 0");
}

OneBodyOperator h0_matrix(const BasisCatalog& catalog) {
  Eigen::VectorXcd diag(static_cast<Eigen::Index>(catalog.size()));
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto& m = catalog.mode(i);
    diag[static_cast<Eigen::Index>(i)] = m.label.lambda * m.energy;
  }
  return {diag.asDiagonal(), true};
}

Matrix field_matrix(const BasisCatalog& catalog, const std::vector<std::pair<Vec3, Matrix4>>& coefficients) {
  const auto& grid = catalog.grid();
  const auto M = static_cast<Eigen::Index>(catalog.size());
  Matrix out = Matrix::Zero(M, M);
  for (const auto& [k, coeff] : coefficients) {
    const IVec3 dk = grid.wave_index(k);
    for (int c : dk)
      if (std::abs(c) > 2 * grid.n_max()) throw std::invalid_argument("field_matrix: wave vector exceeds 2 n_max band");
    for (std::size_t col = 0; col < catalog.size(); ++col) {
      const auto& from = catalog.mode(col);
      const IVec3 target{from.label.n[0] + dk[0], from.label.n[1] + dk[1], from.label.n[2] + dk[2]};
      const Spinor image = coeff * from.u;
      for (std::size_t row : catalog.modes_at(target))
        out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += catalog.mode(row).u.dot(image);
    }
  }
  return out;
}

OneBodyOperator interaction_matrix(const BasisCatalog& catalog, const PotentialSpec& pot, double t, double charge) {
  pot.validate();
  std::vector<std::pair<Vec3, Matrix4>> coeffs;
  for (const auto& term : pot.terms) {
    const double g = term.envelope(t);
    for (const auto& m : term.a0) coeffs.emplace_back(m.k, (charge * g * m.amplitude) * Matrix4::Identity());
    for (const auto& m : term.a) {
      Matrix4 c = Matrix4::Zero();
      for (int i = 0; i < 3; ++i) c -= (charge * g * m.amplitude[static_cast<std::size_t>(i)]) * alpha(i);
      coeffs.emplace_back(m.k, c);
    }
  }
  return make_hermitian(field_matrix(catalog, coeffs));
}

OneBodyOperator chi_matrix(const BasisCatalog& catalog, const GaugeFunction& chi, double t) {
  chi.validate();
  std::vector<std::pair<Vec3, Matrix4>> coeffs;
  const double g = chi.envelope(t);
  for (const auto& m : chi.chi) coeffs.emplace_back(m.k, (g * m.amplitude) * Matrix4::Identity());
  return make_hermitian(field_matrix(catalog, coeffs));
}

OneBodyOperator grad_chi_matrix(const BasisCatalog& catalog, const GaugeFunction& chi, double t) {
  chi.validate();
  std::vector<std::pair<Vec3, Matrix4>> coeffs;
  const double g = chi.envelope(t);
  for (const auto& m : chi.chi) {
    Matrix4 c = Matrix4::Zero();
    for (int i = 0; i < 3; ++i) c += (kI * m.k[static_cast<std::size_t>(i)] * m.amplitude * g) * alpha(i);
    coeffs.emplace_back(m.k, c);
  }
  return make_hermitian(field_matrix(catalog, coeffs));
}

Matrix unitary_exp(const Matrix& h, double dt) {
  Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
  if (eig.info() != Eigen::Success) throw std::runtime_error("unitary_exp: eigendecomposition failed");
  const Eigen::VectorXcd phases = (eig.eigenvalues().cast<cplx>() * cplx(0.0, -dt)).array().exp();
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Matrix gauge_phase(const OneBodyOperator& x, double charge) {
  if (hermiticity_defect(x.entries) > 1e-12) throw std::invalid_argument("gauge_phase: generator is not hermitian");
  return unitary_exp(x.entries, charge);
}

PotentialSpec gauge_transform(const PotentialSpec& pot, const GaugeFunction& chi) {
  chi.validate();
  for (const auto& m : chi.chi) {
    try {
      check_band(m.k, pot.k_band, "gauge_transform");
    } catch (const std::invalid_argument&) {
      throw std::invalid_argument("gauge_transform: grad chi exceeds the potential's band limit");
    }
  }
  PotentialSpec out = pot;
  // d chi / dt enters A_0 with envelope g'.
  PotentialTerm scalar{chi.envelope.differentiated(), {}, {}};
  // -grad chi enters A with envelope g: a_k -> a_k - i k chi_k.
  PotentialTerm vector{chi.envelope, {}, {}};
  for (const auto& m : chi.chi) {
    scalar.a0.push_back({m.k, m.amplitude});
    vector.a.push_back({m.k, {-kI * m.k[0] * m.amplitude, -kI * m.k[1] * m.amplitude, -kI * m.k[2] * m.amplitude}});
  }
  out.terms.push_back(std::move(scalar));
  out.terms.push_back(std::move(vector));
  return out;
}

FieldCoefficients field_coefficients(const PotentialSpec& pot, double t) {
  // The grid only keys the merge; any spacing that divides every k works.
  std::map<IVec3, std::pair<Vec3, std::array<cplx, 3>>> e_field, b_field;
  auto key = [](const Vec3& k) {
    return IVec3{static_cast<int>(std::lround(k[0] * 1e6)), static_cast<int>(std::lround(k[1] * 1e6)),
                 static_cast<int>(std::lround(k[2] * 1e6))};
  };
  auto add = [&](auto& field, const Vec3& k, const std::array<cplx, 3>& v) {
    auto& slot = field[key(k)];
    slot.first = k;
    for (std::size_t i = 0; i < 3; ++i) slot.second[i] += v[i];
  };
  for (const auto& term : pot.terms) {
    const double g = term.envelope(t);
    const double dg = term.envelope.derivative(t);
    for (const auto& m : term.a0)  // -grad A_0
      add(e_field, m.k, {-kI * m.k[0] * m.amplitude * g, -kI * m.k[1] * m.amplitude * g, -kI * m.k[2] * m.amplitude * g});
    for (const auto& m : term.a) {
      const auto& a = m.amplitude;
      add(e_field, m.k, {-dg * a[0], -dg * a[1], -dg * a[2]});  // -dA/dt
      add(b_field, m.k, {kI * g * (m.k[1] * a[2] - m.k[2] * a[1]), kI * g * (m.k[2] * a[0] - m.k[0] * a[2]),
                         kI * g * (m.k[0] * a[1] - m.k[1] * a[0])});
    }
  }
  FieldCoefficients out;
  for (const auto& [_, v] : e_field) out.electric.push_back({v.first, v.second});
  for (const auto& [_, v] : b_field) out.magnetic.push_back({v.first, v.second});
  return out;
}

OneBodyPropagator propagate(const OneBodyGenerator& h, double t0, double t1, int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("propagate: n_steps must be >= 1");
  const double dt = (t1 - t0) / n_steps;
  OneBodyPropagator out;
  out.times.reserve(static_cast<std::size_t>(n_steps) + 1);
  out.u.reserve(static_cast<std::size_t>(n_steps) + 1);
  Matrix u0 = h(t0);
  out.times.push_back(t0);
  out.u.push_back(Matrix::Identity(u0.rows(), u0.cols()));
  for (int step = 0; step < n_steps; ++step) {
    const double t = t0 + step * dt;
    out.u.push_back(unitary_exp(h(t + 0.5 * dt), dt) * out.u.back());
    out.times.push_back(t0 + (step + 1) * dt);
  }
  return out;
}

OneBodyGenerator dirac_generator(const BasisCatalog& catalog, const PotentialSpec& pot, double charge) {
  pot.validate();
  // Each term is a fixed matrix times its envelope.
  std::vector<std::pair<Envelope, Matrix>> terms;
  for (const auto& term : pot.terms) {
    PotentialSpec unit{{PotentialTerm{Envelope::constant(), term.a0, term.a}}, pot.k_band};
    terms.emplace_back(term.envelope, interaction_matrix(catalog, unit, 0.0, charge).entries);
  }
  Matrix h0 = h0_matrix(catalog).entries;
  return [terms = std::move(terms), h0 = std::move(h0)](double t) -> Matrix {
    Matrix h = h0;
    for (const auto& [envelope, k] : terms) h += envelope(t) * k;
    return h;
  };
}

std::vector<std::size_t> interior_rows(const BasisCatalog& catalog, int margin) {
  std::vector<std::size_t> rows;
  const int limit = catalog.grid().n_max() - margin;
  for (std::size_t i = 0; i < catalog.size(); ++i) {
    const auto& n = catalog.mode(i).label.n;
    if (std::all_of(n.begin(), n.end(), [&](int c) { return std::abs(c) <= limit; })) rows.push_back(i);
  }
  return rows;
}

int band_index(const GaugeFunction& chi, const MomentumGrid& grid) {
  int band = 0;
  for (const auto& m : chi.chi)
    for (int c : grid.wave_index(m.k)) band = std::max(band, std::abs(c));
  return band;
}

GaugeResidual gauge_identity_residual(const BasisCatalog& catalog, const GaugeFunction& chi, double t, double charge,
                                      int window) {
  const Matrix h0 = h0_matrix(catalog).entries;
  const Matrix w = gauge_phase(chi_matrix(catalog, chi, t), charge);
  const Matrix g = grad_chi_matrix(catalog, chi, t).entries;
  const Matrix r = h0 * w - w * (-charge * g + h0);

  GaugeResidual out;
  if (r.size() == 0) return out;
  out.boundary = r.cwiseAbs().maxCoeff();
  const int margin = window >= 0 ? catalog.grid().n_max() - window : band_index(chi, catalog.grid());
  for (std::size_t row : interior_rows(catalog, margin))
    out.interior = std::max(out.interior, r.row(static_cast<Eigen::Index>(row)).cwiseAbs().maxCoeff());
  return out;
}

}  // namespace diracsea
