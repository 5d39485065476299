#pragma once

// First-quantized operators over a BasisCatalog: free Hamiltonian, coupling
// to a classical band-limited potential, gauge functions, and time-ordered
// one-body propagators.
//
// A multiplication operator f(x) = sum_k f_k e^{ik.x} couples column mode
// (p) to row mode (p + k) with element u_row^dagger F_k u_col. Couplings
// whose target momentum leaves the catalog are dropped (hard cutoff).

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "diracsea/modes.hpp"

namespace diracsea {

using Matrix = Eigen::MatrixXcd;

struct OneBodyOperator {
  Matrix entries;
  bool hermitian = false;

  std::size_t dim() const { return static_cast<std::size_t>(entries.rows()); }
};

/// Builds an operator flagged hermitian; throws std::invalid_argument if the
/// matrix is not square or ||H - H^dagger|| exceeds 1e-12.
OneBodyOperator make_hermitian(Matrix entries);

double hermiticity_defect(const Matrix& m);
double unitarity_defect(const Matrix& u);

/// Smooth scalar time profile with analytic derivatives of any order.
class Envelope {
 public:
  using Profile = std::function<double(double t, int order)>;

  explicit Envelope(Profile profile) : profile_(std::move(profile)) {}

  /// g(t) = 1.
  static Envelope constant();
  /// g(t) = (1 - cos(omega t)) / (1 - cos(omega t_final)), so g(0) = g'(0) = 0
  /// and g(t_final) = 1. Throws if cos(omega t_final) = 1.
  static Envelope ramp(double omega, double t_final);
  /// g(t) = sin(omega t + phase).
  static Envelope sinusoid(double omega, double phase);

  double operator()(double t) const { return profile_(t, 0); }
  double derivative(double t, int order = 1) const { return profile_(t, order); }
  /// The envelope g' (with its own derivatives).
  Envelope differentiated() const;

 private:
  Profile profile_;
};

struct ScalarMode {
  Vec3 k{};
  cplx amplitude{};
};

struct VectorMode {
  Vec3 k{};
  std::array<cplx, 3> amplitude{};
};

/// One envelope multiplying a band-limited (A_0, A) pair.
struct PotentialTerm {
  Envelope envelope = Envelope::constant();
  std::vector<ScalarMode> a0;
  std::vector<VectorMode> a;
};

/// (A_0, A)(x, t) = sum over terms of envelope(t) * sum_k amplitude_k e^{ik.x}.
/// Gauge transforms append terms, which is how the g and g' time profiles of
/// grad chi and d chi / dt are carried.
struct PotentialSpec {
  std::vector<PotentialTerm> terms;
  /// Largest |k_i| admitted; infinity defers to the grid's 2 n_max bound.
  double k_band = std::numeric_limits<double>::infinity();

  /// Throws std::invalid_argument unless every term satisfies the reality
  /// condition amplitude(-k) = conj(amplitude(k)) and the band limit.
  void validate() const;
};

struct GaugeFunction {
  std::vector<ScalarMode> chi;
  Envelope envelope = Envelope::constant();
  double k_band = std::numeric_limits<double>::infinity();

  double value(const Vec3& x, double t) const;
  /// Reality and band limit. The initial conditions g(0) = g'(0) = 0 are
  /// checked separately by require_initial_conditions().
  void validate() const;
  void require_initial_conditions() const;
};

/// Diagonal lambda E_p per catalog mode.
OneBodyOperator h0_matrix(const BasisCatalog& catalog);

/// Matrix of the multiplication operator sum_k F_k e^{ik.x} where F_k are
/// 4x4 spinor-space coefficients. Throws for off-grid or over-band k.
Matrix field_matrix(const BasisCatalog& catalog, const std::vector<std::pair<Vec3, Matrix4>>& coefficients);

/// -e alpha.A + e A_0 at time t.
OneBodyOperator interaction_matrix(const BasisCatalog& catalog, const PotentialSpec& pot, double t,
                                   double charge = 1.0);
/// X(t): the multiplication operator chi(x, t).
OneBodyOperator chi_matrix(const BasisCatalog& catalog, const GaugeFunction& chi, double t);
/// G(t): the multiplication operator alpha . grad chi(x, t).
OneBodyOperator grad_chi_matrix(const BasisCatalog& catalog, const GaugeFunction& chi, double t);

/// exp(-i e X) through a hermitian eigendecomposition.
Matrix gauge_phase(const OneBodyOperator& x, double charge = 1.0);

/// exp(-i h dt) for hermitian h.
Matrix unitary_exp(const Matrix& h, double dt);

/// A' = A - grad chi, A_0' = A_0 + d chi / dt. Throws when a chi wave vector
/// falls outside the potential's band.
PotentialSpec gauge_transform(const PotentialSpec& pot, const GaugeFunction& chi);

/// Fourier coefficients of E = -dA/dt - grad A_0 and B = curl A at time t,
/// merged by wave vector and sorted.
struct FieldCoefficients {
  std::vector<VectorMode> electric;
  std::vector<VectorMode> magnetic;
};
FieldCoefficients field_coefficients(const PotentialSpec& pot, double t);

struct OneBodyPropagator {
  std::vector<double> times;
  std::vector<Matrix> u;  ///< u[n] maps c(t_0) to c(t_n); u[0] = I
};

using OneBodyGenerator = std::function<Matrix(double t)>;

/// Midpoint exponential stepping u <- exp(-i h(t + dt/2) dt) u.
OneBodyPropagator propagate(const OneBodyGenerator& h, double t0, double t1, int n_steps);

/// Generator h0 + interaction(pot, t) for a catalog.
OneBodyGenerator dirac_generator(const BasisCatalog& catalog, const PotentialSpec& pot, double charge = 1.0);

struct GaugeResidual {
  double interior = 0.0;
  double boundary = 0.0;
};

/// Residual of H0 exp(-ieX) = exp(-ieX)(-e G + H0) on the truncated basis.
/// Interior rows are those whose momentum lies at least the chi band inside
/// the cutoff; boundary covers every row. A nonnegative `window` replaces the
/// interior by the fixed rows |n_i| <= window, so a cutoff scan compares the
/// same momenta at every n_max.
GaugeResidual gauge_identity_residual(const BasisCatalog& catalog, const GaugeFunction& chi, double t,
                                      double charge = 1.0, int window = -1);

/// Catalog rows whose momentum index satisfies |n_i| <= n_max - margin.
std::vector<std::size_t> interior_rows(const BasisCatalog& catalog, int margin);

/// Largest |k_i| of chi in units of 2 pi / L.
int band_index(const GaugeFunction& chi, const MomentumGrid& grid);

}  // namespace diracsea
