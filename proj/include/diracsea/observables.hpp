#pragma once

// Charge and current densities, free-field energies in both pictures, and
// closed-form oracles for the freely evolving two-mode state
// (b_1^dagger + b_2^dagger)|0> / sqrt(2).
//
// Densities are not normal ordered: the filled sea contributes the uniform
// background e (M/2) / V to rho. A density built from correlations is a
// band-limited Fourier sum, so spatial derivatives are taken exactly on its
// coefficients.

#include <string>
#include <vector>

#include "diracsea/fock.hpp"
#include "diracsea/gaussian.hpp"
#include "diracsea/modes.hpp"
#include "diracsea/onebody.hpp"

namespace diracsea {

struct SpatialGrid {
  std::vector<Vec3> points;
};

/// Uniform points in [0, L)^d; `per_axis` <= 0 selects 4 n_max + 1.
SpatialGrid make_spatial_grid(const MomentumGrid& grid, int per_axis = 0);

/// Fourier coefficients of rho(x) and J(x) for a correlation matrix.
struct DensityFourier {
  std::vector<ScalarMode> rho;
  std::vector<VectorMode> current;
};
DensityFourier density_fourier(const CorrelationMatrix& c, const BasisCatalog& catalog, double charge = 1.0);

double evaluate(const std::vector<ScalarMode>& field, const Vec3& x);
Vec3 evaluate(const std::vector<VectorMode>& field, const Vec3& x);
/// Exact divergence of a band-limited vector field.
std::vector<ScalarMode> divergence(const std::vector<VectorMode>& field);

/// e sum_ij phi_i^dagger(x) phi_j(x) C_ij. Throws for x outside the box.
double charge_density(const CorrelationMatrix& c, const BasisCatalog& catalog, const Vec3& x, double charge = 1.0);
double charge_density(const FockState& state, const LadderSet& ladders, const BasisCatalog& catalog, const Vec3& x,
                      double charge = 1.0);
Vec3 current_density(const CorrelationMatrix& c, const BasisCatalog& catalog, const Vec3& x, double charge = 1.0);
Vec3 current_density(const FockState& state, const LadderSet& ladders, const BasisCatalog& catalog, const Vec3& x,
                     double charge = 1.0);

struct FieldSample {
  std::vector<double> rho;
  std::vector<Vec3> current;
  std::vector<double> div_current;
};
FieldSample sample_fields(const CorrelationMatrix& c, const BasisCatalog& catalog, const SpatialGrid& points,
                          double charge = 1.0);

struct FieldSeries {
  std::string provenance;  ///< picture and backend, e.g. "schrodinger/fock"
  std::vector<Vec3> points;
  std::vector<double> times;
  std::vector<FieldSample> samples;
  std::vector<double> energy;  ///< free-field energy per time (optional)

  void push(double t, FieldSample sample, double e = 0.0);
};

/// max |d rho / dt + div J| with d/dt by centered differences over the
/// stored times. Throws for fewer than three samples.
double continuity_residual(const FieldSeries& series);

/// Centered time derivative of rho at interior sample n.
std::vector<double> drho_dt_centered(const FieldSeries& series, std::size_t n);

/// <state|H0|state> for the fixed Schrodinger-picture operator.
double free_energy_schrodinger(const FockState& state, const ManyBodyOperator& h0);
double free_energy_schrodinger(const CorrelationMatrix& c, const BasisCatalog& catalog);
/// Expectation of the quantization of u^dagger h0 u in the initial state.
double free_energy_heisenberg(const CorrelationMatrix& initial, const Matrix& u, const BasisCatalog& catalog);
double free_energy_heisenberg(const FockState& initial, const LadderSet& ladders, const Matrix& u,
                              const BasisCatalog& catalog);

/// Closed-form d rho / dt of the freely evolving two-mode state at (x, t).
double drho_dt_oracle(const Vec3& x, double t, const SpinorMode& mode1, const SpinorMode& mode2, double charge,
                      double volume);
/// Closed-form div J of the same state.
double divj_oracle(const Vec3& x, double t, const SpinorMode& mode1, const SpinorMode& mode2, double charge,
                   double volume);
/// True when the interference term is static (E1 = E2 and real overlap), so
/// d rho / dt vanishes identically.
bool oracle_is_degenerate(const SpinorMode& mode1, const SpinorMode& mode2);

/// Fourier coefficients of the two oracles at time t.
std::vector<ScalarMode> drho_dt_profile(double t, const SpinorMode& mode1, const SpinorMode& mode2, double charge,
                                        double volume);
std::vector<ScalarMode> divj_profile(double t, const SpinorMode& mode1, const SpinorMode& mode2, double charge,
                                     double volume);

/// (E_1 + E_2) / 2: free energy of the two-mode state above the vacuum.
double delta_xi(const SpinorMode& mode1, const SpinorMode& mode2);

/// int a(x) b(x) dx = V sum_k a_k b_{-k} for real band-limited fields.
double fourier_pairing(const MomentumGrid& grid, const std::vector<ScalarMode>& a, const std::vector<ScalarMode>& b);

/// delta_xi + int chi(x, t) div J(x, t) dx, with chi given by its
/// coefficients at t. Throws when a wave vector is off the grid.
double energy_identity_rhs(const MomentumGrid& grid, const std::vector<ScalarMode>& chi_at_t,
                           const std::vector<ScalarMode>& div_current, double delta_xi);

}  // namespace diracsea
