#include "diracsea/modes.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace diracsea {

namespace {

Matrix4 make_alpha(int axis) {
  // alpha_i = [[0, sigma_i], [sigma_i, 0]]
  Eigen::Matrix2cd sigma;
  const cplx i{0.0, 1.0};
  switch (axis) {
    case 0: sigma << 0.0, 1.0, 1.0, 0.0; break;
    case 1: sigma << 0.0, -i, i, 0.0; break;
    default: sigma << 1.0, 0.0, 0.0, -1.0; break;
  }
  Matrix4 a = Matrix4::Zero();
  a.block<2, 2>(0, 2) = sigma;
  a.block<2, 2>(2, 0) = sigma;
  return a;
}

Eigen::Matrix2cd sigma_dot(const Vec3& p) {
  const cplx i{0.0, 1.0};
  Eigen::Matrix2cd s;
  s << p[2], p[0] - i * p[1], p[0] + i * p[1], -p[2];
  return s;
}

}  // namespace

const Matrix4& alpha(int axis) {
  static const std::array<Matrix4, 3> a{make_alpha(0), make_alpha(1), make_alpha(2)};
  if (axis < 0 || axis > 2) throw std::out_of_range("alpha: axis must be 0, 1 or 2");
  return a[static_cast<std::size_t>(axis)];
}

const Matrix4& beta() {
  static const Matrix4 b = Eigen::Matrix<cplx, 4, 1>(1.0, 1.0, -1.0, -1.0).asDiagonal();
  return b;
}

Matrix4 dirac_hamiltonian(const Vec3& p, double m) {
  return p[0] * alpha(0) + p[1] * alpha(1) + p[2] * alpha(2) + m * beta();
}

double norm(const Vec3& v) { return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]); }

MomentumGrid::MomentumGrid(double box_length, int dim, int n_max)
    : box_length_(box_length), dim_(dim), n_max_(n_max) {
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw std::invalid_argument("MomentumGrid: box length must be positive");
  if (dim != 1 && dim != 3) throw std::invalid_argument("MomentumGrid: dim must be 1 or 3");
  if (n_max < 0) throw std::invalid_argument("MomentumGrid: n_max must be >= 0");
}

double MomentumGrid::volume() const { return std::pow(box_length_, dim_); }

double MomentumGrid::unit() const { return 2.0 * std::numbers::pi / box_length_; }

bool MomentumGrid::contains(const IVec3& n) const {
  if (dim_ == 1 && (n[0] != 0 || n[1] != 0)) return false;
  return std::all_of(n.begin(), n.end(), [&](int c) { return std::abs(c) <= n_max_; });
}

Vec3 MomentumGrid::momentum(const IVec3& n) const {
  const double q = unit();
  return {q * n[0], q * n[1], q * n[2]};
}

IVec3 MomentumGrid::wave_index(const Vec3& k) const {
  IVec3 n{};
  for (std::size_t a = 0; a < 3; ++a) {
    const double x = k[a] / unit();
    const double r = std::round(x);
    if (std::abs(x - r) > 1e-9 * std::max(1.0, std::abs(x)))
      throw std::invalid_argument("wave vector is not commensurate with the momentum grid");
    n[a] = static_cast<int>(r);
  }
  if (dim_ == 1 && (n[0] != 0 || n[1] != 0))
    throw std::invalid_argument("one-dimensional grid only admits wave vectors along z");
  return n;
}

std::vector<IVec3> MomentumGrid::indices() const {
  std::vector<IVec3> out;
  if (dim_ == 1) {
    for (int z = -n_max_; z <= n_max_; ++z) out.push_back({0, 0, z});
    return out;
  }
  for (int x = -n_max_; x <= n_max_; ++x)
    for (int y = -n_max_; y <= n_max_; ++y)
      for (int z = -n_max_; z <= n_max_; ++z) out.push_back({x, y, z});
  return out;
}

double mode_energy(const Vec3& p, double m) {
  if (m < 0.0) throw std::invalid_argument("mode_energy: negative mass");
  const double p2 = p[0] * p[0] + p[1] * p[1] + p[2] * p[2];
  return std::sqrt(p2 + m * m);
}

SpinorMode dirac_spinor(const ModeLabel& label, const MomentumGrid& grid, double m) {
  if (label.lambda != 1 && label.lambda != -1)
    throw std::invalid_argument("dirac_spinor: lambda must be +1 or -1");
  if (label.two_s != 1 && label.two_s != -1)
    throw std::invalid_argument("dirac_spinor: spin must be +1/2 or -1/2");
  if (!grid.contains(label.n)) throw std::invalid_argument("dirac_spinor: momentum off the grid");

  SpinorMode mode;
  mode.label = label;
  mode.p = grid.momentum(label.n);
  mode.energy = mode_energy(mode.p, m);
  if (mode.energy == 0.0) throw std::invalid_argument("dirac_spinor: m = 0 at p = 0 is degenerate");

  // Large block carries the two-spinor chi_s, small block (sigma.p / (E+m)) chi_s.
  const Eigen::Vector2cd chi = label.two_s == 1 ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0);
  const Eigen::Vector2cd small = sigma_dot(mode.p) * chi / (mode.energy + m);
  const double scale = std::sqrt((mode.energy + m) / (2.0 * mode.energy));
  if (label.lambda == 1) {
    mode.u << chi, small;
  } else {
    mode.u << -small, chi;
  }
  mode.u *= scale;
  return mode;
}

BasisCatalog::BasisCatalog(MomentumGrid grid, double mass, std::vector<SpinorMode> modes)
    : grid_(grid), mass_(mass), modes_(std::move(modes)) {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    const auto [it, inserted] = index_.emplace(modes_[i].label, i);
    if (!inserted) throw std::invalid_argument("BasisCatalog: duplicate mode label");
    by_momentum_[modes_[i].label.n].push_back(i);
  }
}

std::size_t BasisCatalog::index(const ModeLabel& label) const {
  const auto it = index_.find(label);
  if (it == index_.end()) throw std::out_of_range("BasisCatalog: label not in catalog");
  return it->second;
}

bool BasisCatalog::contains(const ModeLabel& label) const { return index_.contains(label); }

std::span<const std::size_t> BasisCatalog::modes_at(const IVec3& n) const {
  const auto it = by_momentum_.find(n);
  if (it == by_momentum_.end()) return {};
  return it->second;
}

double BasisCatalog::sea_energy_sum() const {
  double sum = 0.0;
  for (const auto& m : modes_)
    if (m.label.lambda == -1) sum += m.energy;
  return sum;
}

BasisCatalog build_catalog(const MomentumGrid& grid, double m) {
  const auto all = grid.indices();
  return build_catalog(grid, m, all);
}

BasisCatalog build_catalog(const MomentumGrid& grid, double m, std::span<const IVec3> window) {
  if (m < 0.0) throw std::invalid_argument("build_catalog: negative mass");
  std::vector<IVec3> momenta(window.begin(), window.end());
  std::sort(momenta.begin(), momenta.end());
  if (std::adjacent_find(momenta.begin(), momenta.end()) != momenta.end())
    throw std::invalid_argument("build_catalog: repeated momentum in window");

  std::vector<SpinorMode> modes;
  modes.reserve(4 * momenta.size());
  for (int lambda : {1, -1})
    for (const auto& n : momenta) {
      if (!grid.contains(n)) throw std::invalid_argument("build_catalog: window momentum off the grid");
      for (int two_s : {1, -1}) modes.push_back(dirac_spinor({lambda, two_s, n}, grid, m));
    }
  return BasisCatalog(grid, m, std::move(modes));
}

cplx mode_overlap(const SpinorMode& a, const SpinorMode& b) {
  if (a.p != b.p) return 0.0;
  return a.u.dot(b.u);
}

cplx mode_overlap(const BasisCatalog& ca, std::size_t a, const BasisCatalog& cb, std::size_t b) {
  if (!(ca.grid() == cb.grid())) throw std::invalid_argument("mode_overlap: modes from mismatched grids");
  return mode_overlap(ca.mode(a), cb.mode(b));
}

}  // namespace diracsea
