#include "diracsea/observables.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

namespace diracsea {

namespace {

constexpr cplx kI{0.0, 1.0};

cplx plane_wave(const Vec3& k, const Vec3& x) { return std::exp(kI * (k[0] * x[0] + k[1] * x[1] + k[2] * x[2])); }

void require_inside(const MomentumGrid& grid, const Vec3& x) {
  const double L = grid.box_length();
  for (int a = 0; a < 3; ++a) {
    const double c = x[static_cast<std::size_t>(a)];
    const bool active = grid.dim() == 3 || a == 2;
    if (active ? (c < 0.0 || c >= L) : c != 0.0) throw std::invalid_argument("density: sample point outside the box");
  }
}

Vec3 diff(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }

cplx spinor_current(const Spinor& a, const Spinor& b, int axis) { return a.dot(alpha(axis) * b); }

// Phase factor Z e^{-i dE t} of the interference term u_1^dagger M u_2 e^{i dp.x} e^{-i dE t}.
cplx two_mode_phase(double t, const SpinorMode& m1, const SpinorMode& m2) {
  return std::exp(cplx(0.0, -(m2.energy - m1.energy) * t));
}

// Coefficients a e^{i dp.x} + c.c. as a real Fourier list.
std::vector<ScalarMode> with_conjugate(const Vec3& dp, cplx a) {
  if (dp == Vec3{0.0, 0.0, 0.0}) return {{dp, 2.0 * a.real()}};
  return {{dp, a}, {{-dp[0], -dp[1], -dp[2]}, std::conj(a)}};
}

}  // namespace

SpatialGrid make_spatial_grid(const MomentumGrid& grid, int per_axis) {
  const int n = per_axis > 0 ? per_axis : 4 * grid.n_max() + 1;
  const double h = grid.box_length() / n;
  SpatialGrid out;
  if (grid.dim() == 1) {
    for (int z = 0; z < n; ++z) out.points.push_back({0.0, 0.0, h * z});
    return out;
  }
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      for (int z = 0; z < n; ++z) out.points.push_back({h * x, h * y, h * z});
  return out;
}

DensityFourier density_fourier(const CorrelationMatrix& c, const BasisCatalog& catalog, double charge) {
  if (c.dim() != catalog.size()) throw std::invalid_argument("density_fourier: dimension mismatch");
  const double scale = charge / catalog.grid().volume();
  std::map<IVec3, std::pair<cplx, std::array<cplx, 3>>> coeff;
  std::map<IVec3, Vec3> wave;
  for (std::size_t i = 0; i < catalog.size(); ++i)
    for (std::size_t j = 0; j < catalog.size(); ++j) {
      const cplx cij = c.C(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (cij == cplx(0.0)) continue;
      const auto& mi = catalog.mode(i);
      const auto& mj = catalog.mode(j);
      const IVec3 q{mj.label.n[0] - mi.label.n[0], mj.label.n[1] - mi.label.n[1], mj.label.n[2] - mi.label.n[2]};
      auto& slot = coeff[q];
      wave[q] = diff(mj.p, mi.p);
      slot.first += scale * mi.u.dot(mj.u) * cij;
      for (int a = 0; a < 3; ++a) slot.second[static_cast<std::size_t>(a)] += scale * spinor_current(mi.u, mj.u, a) * cij;
    }
  DensityFourier out;
  for (const auto& [q, v] : coeff) {
    out.rho.push_back({wave[q], v.first});
    out.current.push_back({wave[q], v.second});
  }
  return out;
}

double evaluate(const std::vector<ScalarMode>& field, const Vec3& x) {
  cplx sum = 0.0;
  for (const auto& m : field) sum += m.amplitude * plane_wave(m.k, x);
  return sum.real();
}

Vec3 evaluate(const std::vector<VectorMode>& field, const Vec3& x) {
  std::array<cplx, 3> sum{};
  for (const auto& m : field) {
    const cplx w = plane_wave(m.k, x);
    for (std::size_t a = 0; a < 3; ++a) sum[a] += m.amplitude[a] * w;
  }
  return {sum[0].real(), sum[1].real(), sum[2].real()};
}

std::vector<ScalarMode> divergence(const std::vector<VectorMode>& field) {
  std::vector<ScalarMode> out;
  out.reserve(field.size());
  for (const auto& m : field)
    out.push_back({m.k, kI * (m.k[0] * m.amplitude[0] + m.k[1] * m.amplitude[1] + m.k[2] * m.amplitude[2])});
  return out;
}

double charge_density(const CorrelationMatrix& c, const BasisCatalog& catalog, const Vec3& x, double charge) {
  require_inside(catalog.grid(), x);
  return evaluate(density_fourier(c, catalog, charge).rho, x);
}

double charge_density(const FockState& state, const LadderSet& ladders, const BasisCatalog& catalog, const Vec3& x,
                      double charge) {
  return charge_density(CorrelationMatrix{correlation_from_state(state, ladders)}, catalog, x, charge);
}

Vec3 current_density(const CorrelationMatrix& c, const BasisCatalog& catalog, const Vec3& x, double charge) {
  require_inside(catalog.grid(), x);
  return evaluate(density_fourier(c, catalog, charge).current, x);
}

Vec3 current_density(const FockState& state, const LadderSet& ladders, const BasisCatalog& catalog, const Vec3& x,
                     double charge) {
  return current_density(CorrelationMatrix{correlation_from_state(state, ladders)}, catalog, x, charge);
}

FieldSample sample_fields(const CorrelationMatrix& c, const BasisCatalog& catalog, const SpatialGrid& points,
                          double charge) {
  const DensityFourier f = density_fourier(c, catalog, charge);
  const auto div = divergence(f.current);
  FieldSample s;
  for (const auto& x : points.points) {
    require_inside(catalog.grid(), x);
    s.rho.push_back(evaluate(f.rho, x));
    s.current.push_back(evaluate(f.current, x));
    s.div_current.push_back(evaluate(div, x));
  }
  return s;
}

void FieldSeries::push(double t, FieldSample sample, double e) {
  if (!times.empty() && !(t > times.back())) throw std::invalid_argument("FieldSeries: times must increase");
  if (sample.rho.size() != points.size()) throw std::invalid_argument("FieldSeries: sample shape mismatch");
  times.push_back(t);
  samples.push_back(std::move(sample));
  energy.push_back(e);
}

std::vector<double> drho_dt_centered(const FieldSeries& series, std::size_t n) {
  if (n == 0 || n + 1 >= series.times.size()) throw std::out_of_range("drho_dt_centered: need an interior sample");
  const double dt = series.times[n + 1] - series.times[n - 1];
  std::vector<double> out(series.points.size());
  for (std::size_t p = 0; p < out.size(); ++p)
    out[p] = (series.samples[n + 1].rho[p] - series.samples[n - 1].rho[p]) / dt;
  return out;
}

double continuity_residual(const FieldSeries& series) {
  if (series.times.size() < 3) throw std::invalid_argument("continuity_residual: need at least three time samples");
  double worst = 0.0;
  for (std::size_t n = 1; n + 1 < series.times.size(); ++n) {
    const auto drho = drho_dt_centered(series, n);
    for (std::size_t p = 0; p < drho.size(); ++p)
      worst = std::max(worst, std::abs(drho[p] + series.samples[n].div_current[p]));
  }
  return worst;
}

double free_energy_schrodinger(const FockState& state, const ManyBodyOperator& h0) {
  return expectation(state, h0).real();
}

double free_energy_schrodinger(const CorrelationMatrix& c, const BasisCatalog& catalog) {
  return bilinear_expectation(c, h0_matrix(catalog)).real();
}

double free_energy_heisenberg(const CorrelationMatrix& initial, const Matrix& u, const BasisCatalog& catalog) {
  if (unitarity_defect(u) > 1e-10) throw std::invalid_argument("free_energy_heisenberg: propagator is not unitary");
  const Matrix h = u.adjoint() * h0_matrix(catalog).entries * u;
  return bilinear_expectation(initial, h).real();
}

double free_energy_heisenberg(const FockState& initial, const LadderSet& ladders, const Matrix& u,
                              const BasisCatalog& catalog) {
  if (unitarity_defect(u) > 1e-10) throw std::invalid_argument("free_energy_heisenberg: propagator is not unitary");
  const Matrix h = u.adjoint() * h0_matrix(catalog).entries * u;
  return expectation(initial, quantize(h, ladders)).real();
}

double drho_dt_oracle(const Vec3& x, double t, const SpinorMode& mode1, const SpinorMode& mode2, double charge,
                      double volume) {
  // (e / 2V) d/dt [Z e^{i dp.x} e^{-i dE t} + c.c.] = (e / V) Re[-i dE Z e^{i(dp.x - dE t)}]
  const double dE = mode2.energy - mode1.energy;
  const cplx z = mode1.u.dot(mode2.u) * plane_wave(diff(mode2.p, mode1.p), x) * two_mode_phase(t, mode1, mode2);
  return charge / volume * (cplx(0.0, -dE) * z).real();
}

double divj_oracle(const Vec3& x, double t, const SpinorMode& mode1, const SpinorMode& mode2, double charge,
                   double volume) {
  // (e / 2V) div [W e^{i dp.x} e^{-i dE t} + c.c.] = (e / V) Re[i dp.W e^{i(dp.x - dE t)}]
  const Vec3 dp = diff(mode2.p, mode1.p);
  cplx w = 0.0;
  for (int a = 0; a < 3; ++a) w += dp[static_cast<std::size_t>(a)] * spinor_current(mode1.u, mode2.u, a);
  const cplx z = w * plane_wave(dp, x) * two_mode_phase(t, mode1, mode2);
  return charge / volume * (kI * z).real();
}

bool oracle_is_degenerate(const SpinorMode& mode1, const SpinorMode& mode2) {
  return mode1.energy == mode2.energy && mode1.p == mode2.p && std::abs(mode1.u.dot(mode2.u).imag()) < 1e-15;
}

std::vector<ScalarMode> drho_dt_profile(double t, const SpinorMode& mode1, const SpinorMode& mode2, double charge,
                                        double volume) {
  const double dE = mode2.energy - mode1.energy;
  const cplx a = charge / (2.0 * volume) * cplx(0.0, -dE) * mode1.u.dot(mode2.u) * two_mode_phase(t, mode1, mode2);
  return with_conjugate(diff(mode2.p, mode1.p), a);
}

std::vector<ScalarMode> divj_profile(double t, const SpinorMode& mode1, const SpinorMode& mode2, double charge,
                                     double volume) {
  const Vec3 dp = diff(mode2.p, mode1.p);
  cplx w = 0.0;
  for (int a = 0; a < 3; ++a) w += dp[static_cast<std::size_t>(a)] * spinor_current(mode1.u, mode2.u, a);
  const cplx a = charge / (2.0 * volume) * kI * w * two_mode_phase(t, mode1, mode2);
  return with_conjugate(dp, a);
}

double delta_xi(const SpinorMode& mode1, const SpinorMode& mode2) { return 0.5 * (mode1.energy + mode2.energy); }

double fourier_pairing(const MomentumGrid& grid, const std::vector<ScalarMode>& a, const std::vector<ScalarMode>& b) {
  std::map<IVec3, cplx> bk;
  for (const auto& m : b) bk[grid.wave_index(m.k)] += m.amplitude;
  cplx sum = 0.0;
  for (const auto& m : a) {
    const IVec3 n = grid.wave_index(m.k);
    const auto it = bk.find({-n[0], -n[1], -n[2]});
    if (it != bk.end()) sum += m.amplitude * it->second;
  }
  return grid.volume() * sum.real();
}

double energy_identity_rhs(const MomentumGrid& grid, const std::vector<ScalarMode>& chi_at_t,
                           const std::vector<ScalarMode>& div_current, double delta_xi) {
  return delta_xi + fourier_pairing(grid, chi_at_t, div_current);
}

}  // namespace diracsea
