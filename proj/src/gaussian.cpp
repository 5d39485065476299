#include "diracsea/gaussian.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace diracsea {

CorrelationMatrix CorrelationMatrix::checked(Matrix C) {
  if (C.rows() != C.cols()) throw std::invalid_argument("CorrelationMatrix: not square");
  if (hermiticity_defect(C) > 1e-12) throw std::invalid_argument("CorrelationMatrix: not hermitian");
  CorrelationMatrix out{std::move(C)};
  const auto [lo, hi] = occupation_range(out);
  if (lo < -1e-10 || hi > 1.0 + 1e-10) throw std::invalid_argument("CorrelationMatrix: occupations outside [0, 1]");
  return out;
}

CorrelationMatrix vacuum_correlation(const BasisCatalog& catalog) {
  const auto M = static_cast<Eigen::Index>(catalog.size());
  Matrix C = Matrix::Zero(M, M);
  for (Eigen::Index i = 0; i < M; ++i)
    if (catalog.mode(static_cast<std::size_t>(i)).label.lambda == -1) C(i, i) = 1.0;
  return {std::move(C)};
}

CorrelationMatrix omega0_correlation(const BasisCatalog& catalog, std::size_t mode1, std::size_t mode2) {
  if (mode1 == mode2) throw std::invalid_argument("omega0_correlation: modes must be distinct");
  if (catalog.mode(mode1).label.lambda != 1 || catalog.mode(mode2).label.lambda != 1)
    throw std::invalid_argument("omega0_correlation: modes must have positive energy");
  CorrelationMatrix out = vacuum_correlation(catalog);
  const auto a = static_cast<Eigen::Index>(mode1);
  const auto b = static_cast<Eigen::Index>(mode2);
  out.C(a, a) += 0.5;
  out.C(b, b) += 0.5;
  out.C(a, b) += 0.5;
  out.C(b, a) += 0.5;
  return out;
}

CorrelationMatrix evolve_correlation(const CorrelationMatrix& c, const Matrix& u) {
  if (u.rows() != c.C.rows() || u.cols() != c.C.cols())
    throw std::invalid_argument("evolve_correlation: dimension mismatch");
  if (unitarity_defect(u) > 1e-10) throw std::invalid_argument("evolve_correlation: propagator is not unitary");
  return {u.conjugate() * c.C * u.transpose()};
}

cplx bilinear_expectation(const CorrelationMatrix& c, const Matrix& h) {
  if (h.rows() != c.C.rows() || h.cols() != c.C.cols())
    throw std::invalid_argument("bilinear_expectation: dimension mismatch");
  return h.cwiseProduct(c.C).sum();
}

cplx bilinear_expectation(const CorrelationMatrix& c, const OneBodyOperator& h) {
  return bilinear_expectation(c, h.entries);
}

std::pair<double, double> occupation_range(const CorrelationMatrix& c) {
  if (c.C.size() == 0) return {0.0, 0.0};
  Eigen::SelfAdjointEigenSolver<Matrix> eig(c.C, Eigen::EigenvaluesOnly);
  return {eig.eigenvalues().minCoeff(), eig.eigenvalues().maxCoeff()};
}

}  // namespace diracsea
