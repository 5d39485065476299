#pragma once

// Exact many-body layer over 2^M occupation bitstrings (bit i <-> catalog
// mode i). The vacuum is the filled sea: every lambda = -1 mode occupied and
// every lambda = +1 mode empty, so a quantized one-body operator is the plain
// bilinear sum_ij h_ij c_i^dagger c_j.

#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "diracsea/modes.hpp"
#include "diracsea/onebody.hpp"

namespace diracsea {

using SparseMatrix = Eigen::SparseMatrix<cplx>;
using StateVector = Eigen::VectorXcd;

inline constexpr std::size_t kDefaultFockCap = 14;

/// Sign convention of the ladder construction. `none` drops the fermionic
/// sign string and exists only as a negative control for the CAR checks.
enum class SignConvention { jordan_wigner, none };

class LadderSet {
 public:
  /// Annihilators c_0 ... c_{M-1}. `sea` marks the lambda = -1 modes.
  LadderSet(std::vector<bool> sea, SignConvention convention = SignConvention::jordan_wigner,
            std::size_t cap = kDefaultFockCap);

  std::size_t modes() const { return sea_.size(); }
  std::size_t dimension() const { return std::size_t{1} << modes(); }
  bool is_sea(std::size_t i) const { return sea_.at(i); }
  const std::vector<bool>& sea() const { return sea_; }

  const SparseMatrix& c(std::size_t i) const { return c_.at(i); }
  SparseMatrix c_dag(std::size_t i) const { return c_.at(i).adjoint(); }
  /// Electron annihilator b for a lambda = +1 mode.
  const SparseMatrix& b(std::size_t i) const;
  /// Positron annihilator d = c^dagger for a lambda = -1 mode.
  SparseMatrix d(std::size_t i) const;

 private:
  std::vector<bool> sea_;
  std::vector<SparseMatrix> c_;
};

/// Ladders over a catalog. Throws std::invalid_argument when M exceeds the cap.
LadderSet build_ladders(const BasisCatalog& catalog, SignConvention convention = SignConvention::jordan_wigner,
                        std::size_t cap = kDefaultFockCap);
/// Ladders over M abstract modes; the second half plays the sea, matching the
/// catalog ordering (positive-energy modes first).
LadderSet build_ladders(std::size_t modes, SignConvention convention = SignConvention::jordan_wigner,
                        std::size_t cap = kDefaultFockCap);

struct CarResidual {
  double anticommutator = 0.0;  ///< max |{c_i, c_j^dagger} - delta_ij|
  double pair = 0.0;            ///< max |{c_i, c_j}|
};
CarResidual car_residual(const LadderSet& ladders);

struct FockState {
  StateVector amplitudes;

  /// Throws std::invalid_argument when | ||psi|| - 1 | > 1e-10.
  static FockState normalized(StateVector amplitudes);
};

struct ManyBodyOperator {
  SparseMatrix matrix;
  bool hermitian = false;
};

FockState vacuum_state(const LadderSet& ladders);
std::uint64_t vacuum_bits(const LadderSet& ladders);

/// sum_ij h_ij c_i^dagger c_j. Throws on dimension mismatch.
ManyBodyOperator quantize(const OneBodyOperator& h, const LadderSet& ladders);
ManyBodyOperator quantize(const Matrix& h, const LadderSet& ladders);

/// max_i max-entry of [quantize(h), c_i] + sum_j h_ij c_j.
double commutator_identity_check(const Matrix& h, const LadderSet& ladders);

/// (b_1^dagger + b_2^dagger)|0> / sqrt(2) for two distinct lambda = +1 modes.
FockState omega0_state(const LadderSet& ladders, std::size_t mode1, std::size_t mode2);

cplx expectation(const FockState& state, const ManyBodyOperator& op);

/// C_ij = <c_i^dagger c_j>, evaluated by applying the ladders to the state.
Matrix correlation_from_state(const FockState& state, const LadderSet& ladders);

using ManyBodyGenerator = std::function<ManyBodyOperator(double t)>;

struct FockTrajectory {
  std::vector<double> times;
  std::vector<FockState> states;
};

/// exp(-i H dt) psi by scaled Taylor series; exact to double precision for
/// the step sizes used here.
StateVector apply_exponential(const SparseMatrix& h, double dt, const StateVector& psi);

/// Midpoint stepping psi <- exp(-i H(t + dt/2) dt) psi, keeping every state.
/// Throws std::invalid_argument when a generator is not flagged hermitian.
FockTrajectory evolve_schrodinger(const FockState& initial, const ManyBodyGenerator& h, double t0, double t1,
                                  int n_steps);

struct SpectrumReport {
  double vacuum_energy = 0.0;        ///< <0|H0|0>
  double expected_vacuum = 0.0;      ///< -sum over sea modes of E_p
  double min_eigenvalue = 0.0;
  std::uint64_t argmin_state = 0;
  bool argmin_is_vacuum = false;
  double gap = 0.0;                  ///< second-lowest minus lowest eigenvalue
  double lightest_energy = 0.0;      ///< min E_p over the catalog
  double max_offdiagonal = 0.0;      ///< H0 is diagonal in the occupation basis
  double max_diagonal_mismatch = 0.0;  ///< dense eigenvalues vs occupation-basis diagonal
};

/// Full diagonalization of the quantized free Hamiltonian (M <= 10).
SpectrumReport h0_spectrum_check(const LadderSet& ladders, const BasisCatalog& catalog);

}  // namespace diracsea
