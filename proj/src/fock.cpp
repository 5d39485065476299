#include "diracsea/fock.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace diracsea {

namespace {

using Triplet = Eigen::Triplet<cplx>;

// (-1)^(number of occupied modes below `mode` in `bits`).
double sign_below(std::uint64_t bits, std::size_t mode) {
  const std::uint64_t mask = (std::uint64_t{1} << mode) - 1;
  return (std::popcount(bits & mask) & 1) ? -1.0 : 1.0;
}

double max_abs(const SparseMatrix& m) {
  double out = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) out = std::max(out, std::abs(it.value()));
  return out;
}

SparseMatrix identity(std::size_t dim) {
  SparseMatrix id(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  id.setIdentity();
  return id;
}

double one_norm(const SparseMatrix& m) {
  double best = 0.0;
  for (int k = 0; k < m.outerSize(); ++k) {
    double col = 0.0;
    for (SparseMatrix::InnerIterator it(m, k); it; ++it) col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

}  // namespace

LadderSet::LadderSet(std::vector<bool> sea, SignConvention convention, std::size_t cap) : sea_(std::move(sea)) {
  const std::size_t M = sea_.size();
  if (M == 0) throw std::invalid_argument("LadderSet: need at least one mode");
  if (M > cap || M > 24) throw std::invalid_argument("LadderSet: mode count exceeds the Fock cap");
  const std::size_t dim = std::size_t{1} << M;
  c_.reserve(M);
  for (std::size_t i = 0; i < M; ++i) {
    std::vector<Triplet> entries;
    entries.reserve(dim / 2);
    const std::uint64_t bit = std::uint64_t{1} << i;
    for (std::uint64_t n = 0; n < dim; ++n) {
      if (!(n & bit)) continue;
      const double s = convention == SignConvention::jordan_wigner ? sign_below(n, i) : 1.0;
      entries.emplace_back(static_cast<int>(n ^ bit), static_cast<int>(n), s);
    }
    SparseMatrix c(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    c.setFromTriplets(entries.begin(), entries.end());
    c_.push_back(std::move(c));
  }
}

const SparseMatrix& LadderSet::b(std::size_t i) const {
  if (is_sea(i)) throw std::invalid_argument("LadderSet::b: mode has negative energy");
  return c_.at(i);
}

SparseMatrix LadderSet::d(std::size_t i) const {
  if (!is_sea(i)) throw std::invalid_argument("LadderSet::d: mode has positive energy");
  return c_dag(i);
}

LadderSet build_ladders(const BasisCatalog& catalog, SignConvention convention, std::size_t cap) {
  std::vector<bool> sea(catalog.size());
  for (std::size_t i = 0; i < catalog.size(); ++i) sea[i] = catalog.mode(i).label.lambda == -1;
  return LadderSet(std::move(sea), convention, cap);
}

LadderSet build_ladders(std::size_t modes, SignConvention convention, std::size_t cap) {
  std::vector<bool> sea(modes);
  for (std::size_t i = 0; i < modes; ++i) sea[i] = i >= (modes + 1) / 2;
  return LadderSet(std::move(sea), convention, cap);
}

CarResidual car_residual(const LadderSet& ladders) {
  CarResidual out;
  const std::size_t M = ladders.modes();
  const SparseMatrix id = identity(ladders.dimension());
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j) {
      const SparseMatrix cj_dag = ladders.c_dag(j);
      SparseMatrix anti = ladders.c(i) * cj_dag + cj_dag * ladders.c(i);
      if (i == j) anti -= id;
      out.anticommutator = std::max(out.anticommutator, max_abs(anti));
      const SparseMatrix pair = ladders.c(i) * ladders.c(j) + ladders.c(j) * ladders.c(i);
      out.pair = std::max(out.pair, max_abs(pair));
    }
  return out;
}

FockState FockState::normalized(StateVector amplitudes) {
  if (std::abs(amplitudes.norm() - 1.0) > 1e-10) throw std::invalid_argument("FockState: state is not normalized");
  return {std::move(amplitudes)};
}

std::uint64_t vacuum_bits(const LadderSet& ladders) {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < ladders.modes(); ++i)
    if (ladders.is_sea(i)) bits |= std::uint64_t{1} << i;
  return bits;
}

FockState vacuum_state(const LadderSet& ladders) {
  StateVector psi = StateVector::Zero(static_cast<Eigen::Index>(ladders.dimension()));
  psi[static_cast<Eigen::Index>(vacuum_bits(ladders))] = 1.0;
  return {std::move(psi)};
}

ManyBodyOperator quantize(const OneBodyOperator& h, const LadderSet& ladders) {
  ManyBodyOperator op = quantize(h.entries, ladders);
  op.hermitian = h.hermitian;
  return op;
}

ManyBodyOperator quantize(const Matrix& h, const LadderSet& ladders) {
  const std::size_t M = ladders.modes();
  if (static_cast<std::size_t>(h.rows()) != M || static_cast<std::size_t>(h.cols()) != M)
    throw std::invalid_argument("quantize: one-body matrix does not match the mode count");
  const std::size_t dim = ladders.dimension();

  // Nonzero entries of h, so sparse drives stay cheap.
  std::vector<std::pair<std::size_t, std::size_t>> support;
  for (std::size_t i = 0; i < M; ++i)
    for (std::size_t j = 0; j < M; ++j)
      if (h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) != cplx(0.0)) support.emplace_back(i, j);

  std::vector<Triplet> entries;
  entries.reserve(dim * std::min<std::size_t>(support.size(), M * M / 4 + M));
  for (std::uint64_t n = 0; n < dim; ++n) {
    for (const auto& [i, j] : support) {
      const std::uint64_t bj = std::uint64_t{1} << j;
      const std::uint64_t bi = std::uint64_t{1} << i;
      if (!(n & bj)) continue;
      const std::uint64_t mid = n ^ bj;
      if (mid & bi) continue;
      const double s = sign_below(n, j) * sign_below(mid, i);
      entries.emplace_back(static_cast<int>(mid | bi), static_cast<int>(n),
                           s * h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
  }
  SparseMatrix out(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  out.setFromTriplets(entries.begin(), entries.end());
  return {std::move(out), hermiticity_defect(h) <= 1e-12};
}

double commutator_identity_check(const Matrix& h, const LadderSet& ladders) {
  const SparseMatrix big = quantize(h, ladders).matrix;
  double worst = 0.0;
  for (std::size_t i = 0; i < ladders.modes(); ++i) {
    SparseMatrix r = big * ladders.c(i) - ladders.c(i) * big;
    for (std::size_t j = 0; j < ladders.modes(); ++j) {
      const cplx hij = h(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (hij != cplx(0.0)) r += hij * ladders.c(j);
    }
    worst = std::max(worst, max_abs(r));
  }
  return worst;
}

FockState omega0_state(const LadderSet& ladders, std::size_t mode1, std::size_t mode2) {
  if (mode1 == mode2) throw std::invalid_argument("omega0_state: modes must be distinct");
  if (mode1 >= ladders.modes() || mode2 >= ladders.modes()) throw std::out_of_range("omega0_state: mode index");
  if (ladders.is_sea(mode1) || ladders.is_sea(mode2))
    throw std::invalid_argument("omega0_state: modes must have positive energy");
  const StateVector vac = vacuum_state(ladders).amplitudes;
  StateVector psi = (ladders.c_dag(mode1) * vac + ladders.c_dag(mode2) * vac) / std::sqrt(2.0);
  return FockState::normalized(std::move(psi));
}

cplx expectation(const FockState& state, const ManyBodyOperator& op) {
  if (op.matrix.rows() != state.amplitudes.size() || op.matrix.cols() != state.amplitudes.size())
    throw std::invalid_argument("expectation: dimension mismatch");
  return state.amplitudes.dot(op.matrix * state.amplitudes);
}

Matrix correlation_from_state(const FockState& state, const LadderSet& ladders) {
  if (static_cast<std::size_t>(state.amplitudes.size()) != ladders.dimension())
    throw std::invalid_argument("correlation_from_state: dimension mismatch");
  const auto M = static_cast<Eigen::Index>(ladders.modes());
  std::vector<StateVector> lowered;
  lowered.reserve(ladders.modes());
  for (std::size_t j = 0; j < ladders.modes(); ++j) lowered.push_back(ladders.c(j) * state.amplitudes);
  Matrix C(M, M);
  for (Eigen::Index i = 0; i < M; ++i)
    for (Eigen::Index j = 0; j < M; ++j)
      C(i, j) = lowered[static_cast<std::size_t>(i)].dot(lowered[static_cast<std::size_t>(j)]);
  return C;
}

StateVector apply_exponential(const SparseMatrix& h, double dt, const StateVector& psi) {
  const double scale = one_norm(h) * std::abs(dt);
  const int substeps = std::max(1, static_cast<int>(std::ceil(scale / 0.5)));
  const cplx factor(0.0, -dt / substeps);
  StateVector out = psi;
  for (int s = 0; s < substeps; ++s) {
    StateVector term = out;
    StateVector sum = out;
    for (int k = 1; k < 64; ++k) {
      term = (factor / static_cast<double>(k)) * (h * term);
      sum += term;
      if (term.norm() <= std::numeric_limits<double>::epsilon() * 1e-2 * sum.norm()) break;
    }
    out = std::move(sum);
  }
  return out;
}

FockTrajectory evolve_schrodinger(const FockState& initial, const ManyBodyGenerator& h, double t0, double t1,
                                  int n_steps) {
  if (n_steps < 1) throw std::invalid_argument("evolve_schrodinger: n_steps must be >= 1");
  const double dt = (t1 - t0) / n_steps;
  FockTrajectory out;
  out.times.push_back(t0);
  out.states.push_back(initial);
  for (int step = 0; step < n_steps; ++step) {
    const ManyBodyOperator gen = h(t0 + (step + 0.5) * dt);
    if (!gen.hermitian) throw std::invalid_argument("evolve_schrodinger: generator is not hermitian");
    if (gen.matrix.rows() != initial.amplitudes.size())
      throw std::invalid_argument("evolve_schrodinger: dimension mismatch");
    out.states.push_back({apply_exponential(gen.matrix, dt, out.states.back().amplitudes)});
    out.times.push_back(t0 + (step + 1) * dt);
  }
  return out;
}

SpectrumReport h0_spectrum_check(const LadderSet& ladders, const BasisCatalog& catalog) {
  if (ladders.modes() != catalog.size()) throw std::invalid_argument("h0_spectrum_check: ladders do not match catalog");
  if (ladders.modes() > 10) throw std::invalid_argument("h0_spectrum_check: M exceeds the diagonalization cap of 10");
  const ManyBodyOperator h0 = quantize(h0_matrix(catalog), ladders);
  const Matrix dense = Matrix(h0.matrix);
  const auto dim = dense.rows();

  SpectrumReport r;
  r.expected_vacuum = -catalog.sea_energy_sum();
  r.vacuum_energy = expectation(vacuum_state(ladders), h0).real();
  r.lightest_energy = std::numeric_limits<double>::infinity();
  for (const auto& m : catalog.modes()) r.lightest_energy = std::min(r.lightest_energy, m.energy);

  Eigen::VectorXd diagonal(dim);
  for (Eigen::Index n = 0; n < dim; ++n) {
    diagonal[n] = dense(n, n).real();
    for (Eigen::Index k = 0; k < dim; ++k)
      if (k != n) r.max_offdiagonal = std::max(r.max_offdiagonal, std::abs(dense(k, n)));
  }

  Eigen::SelfAdjointEigenSolver<Matrix> eig(dense, Eigen::EigenvaluesOnly);
  if (eig.info() != Eigen::Success) throw std::runtime_error("h0_spectrum_check: diagonalization failed");
  const Eigen::VectorXd& values = eig.eigenvalues();
  Eigen::VectorXd sorted_diag = diagonal;
  std::sort(sorted_diag.begin(), sorted_diag.end());
  r.max_diagonal_mismatch = (values - sorted_diag).cwiseAbs().maxCoeff();

  r.min_eigenvalue = values[0];
  r.gap = dim > 1 ? values[1] - values[0] : 0.0;
  Eigen::Index argmin = 0;
  diagonal.minCoeff(&argmin);
  r.argmin_state = static_cast<std::uint64_t>(argmin);
  r.argmin_is_vacuum = r.argmin_state == vacuum_bits(ladders);
  return r;
}

}  // namespace diracsea
