#pragma once

// Truncated plane-wave Dirac basis in a periodic box.
//
// Conventions: hbar = c = 1, Dirac (standard) representation of alpha and
// beta, spin quantized along z. One-dimensional runs keep full 4-spinors
// with all momenta along the z axis. Plane waves are box normalized,
// phi(x) = u exp(i p.x) / sqrt(V), so mode overlaps are Kronecker deltas.

#include <array>
#include <complex>
#include <cstddef>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace diracsea {

using cplx = std::complex<double>;
using Vec3 = std::array<double, 3>;
using IVec3 = std::array<int, 3>;
using Spinor = Eigen::Matrix<cplx, 4, 1>;
using Matrix4 = Eigen::Matrix<cplx, 4, 4>;

/// alpha_i for i in {0,1,2} and beta.
const Matrix4& alpha(int axis);
const Matrix4& beta();

/// Free one-particle Dirac Hamiltonian alpha.p + beta m at fixed momentum.
Matrix4 dirac_hamiltonian(const Vec3& p, double m);

double norm(const Vec3& v);

class MomentumGrid {
 public:
  MomentumGrid(double box_length, int dim, int n_max);

  double box_length() const { return box_length_; }
  int dim() const { return dim_; }
  int n_max() const { return n_max_; }
  double volume() const;
  /// Spacing 2 pi / L between allowed momenta.
  double unit() const;

  bool contains(const IVec3& n) const;
  Vec3 momentum(const IVec3& n) const;
  /// Integer index of a wave vector. Throws std::invalid_argument when k is
  /// not an integer multiple of 2 pi / L or leaves the grid's dimensions.
  IVec3 wave_index(const Vec3& k) const;
  /// Every allowed index, in lexicographic order.
  std::vector<IVec3> indices() const;

  bool operator==(const MomentumGrid&) const = default;

 private:
  double box_length_;
  int dim_;
  int n_max_;
};

struct ModeLabel {
  int lambda = 1;   ///< +1 positive energy, -1 negative energy
  int two_s = 1;    ///< twice the spin index, +1 or -1
  IVec3 n{0, 0, 0}; ///< momentum index, p = (2 pi / L) n

  double spin() const { return 0.5 * two_s; }
  auto operator<=>(const ModeLabel&) const = default;
};

struct SpinorMode {
  ModeLabel label;
  Vec3 p{0.0, 0.0, 0.0};
  Spinor u;
  double energy = 0.0;  ///< E_p >= m; the mode eigenvalue is lambda * E_p
};

/// +sqrt(|p|^2 + m^2). Throws std::invalid_argument for m < 0.
double mode_energy(const Vec3& p, double m);

/// Unit 4-spinor with (alpha.p + beta m) u = lambda E_p u. The phase makes
/// the spin-s component of the large block (upper for lambda = +1, lower for
/// lambda = -1) real and positive. Throws for m = 0 at p = 0.
SpinorMode dirac_spinor(const ModeLabel& label, const MomentumGrid& grid, double m);

class BasisCatalog {
 public:
  BasisCatalog(MomentumGrid grid, double mass, std::vector<SpinorMode> modes);

  const MomentumGrid& grid() const { return grid_; }
  double mass() const { return mass_; }
  std::size_t size() const { return modes_.size(); }
  const SpinorMode& mode(std::size_t i) const { return modes_.at(i); }
  std::span<const SpinorMode> modes() const { return modes_; }

  /// Throws std::out_of_range for labels outside the catalog.
  std::size_t index(const ModeLabel& label) const;
  bool contains(const ModeLabel& label) const;
  /// Catalog indices of the four modes at momentum index n (empty if n is
  /// outside the catalog's momentum window).
  std::span<const std::size_t> modes_at(const IVec3& n) const;

  /// Sum of E_p over the negative-energy modes.
  double sea_energy_sum() const;

 private:
  MomentumGrid grid_;
  double mass_;
  std::vector<SpinorMode> modes_;
  std::map<ModeLabel, std::size_t> index_;
  std::map<IVec3, std::vector<std::size_t>> by_momentum_;
};

/// Full catalog: M = 4 (2 n_max + 1)^d modes ordered by lambda descending,
/// then n lexicographic, then s descending.
BasisCatalog build_catalog(const MomentumGrid& grid, double m);

/// Catalog restricted to a momentum window (same ordering rule). Used for
/// small exact-Fock runs whose mode count is not of the full-grid form.
BasisCatalog build_catalog(const MomentumGrid& grid, double m, std::span<const IVec3> window);

/// Box-normalized overlap <a|b>: u_a^dagger u_b when momenta agree, else 0.
cplx mode_overlap(const SpinorMode& a, const SpinorMode& b);
/// Same, for modes drawn from two catalogs. Throws std::invalid_argument
/// when the catalogs' grids differ.
cplx mode_overlap(const BasisCatalog& ca, std::size_t a, const BasisCatalog& cb, std::size_t b);

}  // namespace diracsea
