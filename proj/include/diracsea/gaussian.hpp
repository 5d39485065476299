#pragma once

// Number-conserving Gaussian states carried by the one-particle correlation
// matrix C_ij = <c_i^dagger c_j>. Every expectation of a quantized bilinear
// sum_ij h_ij c_i^dagger c_j is the contraction sum_ij h_ij C_ij.

#include <cstddef>

#include "diracsea/modes.hpp"
#include "diracsea/onebody.hpp"

namespace diracsea {

struct CorrelationMatrix {
  Matrix C;

  std::size_t dim() const { return static_cast<std::size_t>(C.rows()); }
  /// Throws std::invalid_argument unless C is hermitian within 1e-12 with
  /// spectrum inside [-1e-10, 1 + 1e-10].
  static CorrelationMatrix checked(Matrix C);
};

/// Projector onto the lambda = -1 modes.
CorrelationMatrix vacuum_correlation(const BasisCatalog& catalog);

/// Vacuum plus (e_1 + e_2)(e_1 + e_2)^dagger / 2 on two distinct electron modes.
CorrelationMatrix omega0_correlation(const BasisCatalog& catalog, std::size_t mode1, std::size_t mode2);

/// Correlations after the field evolves as c(t) = u c(0):
/// C(t) = conj(u) C u^T.
CorrelationMatrix evolve_correlation(const CorrelationMatrix& c, const Matrix& u);

cplx bilinear_expectation(const CorrelationMatrix& c, const Matrix& h);
cplx bilinear_expectation(const CorrelationMatrix& c, const OneBodyOperator& h);

/// Smallest and largest eigenvalue of C.
std::pair<double, double> occupation_range(const CorrelationMatrix& c);

}  // namespace diracsea
