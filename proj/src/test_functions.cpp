#include "dwlab/lab.hpp"

#include "dwlab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace dwlab {

namespace {

// Quintic smoothstep and derivatives on [0, 1].
double q0(double x) { return x * x * x * (10.0 + x * (-15.0 + 6.0 * x)); }
double q1(double x) { return 30.0 * x * x * (x - 1.0) * (x - 1.0); }
double q2(double x) { return 60.0 * x * (2.0 * x - 1.0) * (x - 1.0); }

// Surface measure of the unit sphere in R^n.
double sphere_area(int n) {
  switch (n) {
    case 1: return 2.0;
    case 2: return 2.0 * std::numbers::pi;
    case 3: return 4.0 * std::numbers::pi;
  }
  throw std::invalid_argument("sphere_area: n must be 1, 2 or 3");
}

}  // namespace

// With y = 2x - 1 and g = 1 - q(y): psi = g^l, psi' = -2 l g^{l-1} q'(y),
// psi'' = l g^{l-2} (4 (l-1) q'(y)^2 - 4 g q''(y)).
double CutoffProfile::value(double x) const {
  if (x <= 0.5) return 1.0;
  if (x >= 1.0) return 0.0;
  return std::pow(1.0 - q0(2.0 * x - 1.0), ell);
}

double CutoffProfile::d1(double x) const {
  if (x <= 0.5 || x >= 1.0) return 0.0;
  const double y = 2.0 * x - 1.0, g = 1.0 - q0(y);
  return -2.0 * ell * std::pow(g, ell - 1) * q1(y);
}

double CutoffProfile::d2(double x) const {
  if (x <= 0.5 || x >= 1.0) return 0.0;
  const double y = 2.0 * x - 1.0, g = 1.0 - q0(y);
  return ell * std::pow(g, ell - 2) * (4.0 * (ell - 1) * q1(y) * q1(y) - 4.0 * g * q2(y));
}

double CutoffProfile::ratio1(double x) const {
  if (x <= 0.5) return 0.0;
  const double y = 2.0 * x - 1.0, g = 1.0 - q0(y);
  return -2.0 * ell * q1(y) / g;
}

double CutoffProfile::ratio2(double x) const {
  if (x <= 0.5) return 0.0;
  const double y = 2.0 * x - 1.0, g = 1.0 - q0(y);
  return ell * (4.0 * (ell - 1) * q1(y) * q1(y) / (g * g) - 4.0 * q2(y) / g);
}

namespace {

// psi^{-p'/p} |psi'|^{p'} = (2 l |q'|)^{p'} g^{l - p'}
double eta_term1(const CutoffProfile& c, double x, double pc) {
  if (x <= 0.5 || x >= 1.0) return 0.0;
  const double y = 2.0 * x - 1.0, g = 1.0 - q0(y);
  return std::pow(2.0 * c.ell * std::abs(q1(y)), pc) * std::pow(g, c.ell - pc);
}

// psi^{-p'/p} |psi'' + k psi'/x|^{p'}
//   = l^{p'} |4(l-1) q'^2 - 4 g q'' - 2 k g q'/x|^{p'} g^{l - 2p'}
double eta_term2(const CutoffProfile& c, double x, double pc, double k_over_x) {
  if (x <= 0.5 || x >= 1.0) return 0.0;
  const double y = 2.0 * x - 1.0, g = 1.0 - q0(y);
  const double inner = 4.0 * (c.ell - 1) * q1(y) * q1(y) - 4.0 * g * q2(y) - 2.0 * k_over_x * g * q1(y);
  return std::pow(c.ell * std::abs(inner), pc) * std::pow(g, c.ell - 2.0 * pc);
}

constexpr double kQuadraturePoints = 512.0;
constexpr double kMaxQuadratureSize = 1 << 22;

void fill_radial(const CutoffProfile& c, const Grid& grid, const std::vector<double>& center, double R,
                 RealField& phi, RealField& lap) {
  const Eigen::ArrayXd r = periodic_distance(grid, center);
  const int n = grid.dim();
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double y = r[i] / R;
    phi.values[i] = c.value(y);
    lap.values[i] = c.d2(y) + (y > 0.5 ? (n - 1) / y * c.d1(y) : 0.0);
  }
}

}  // namespace

TestFunctionPair build_test_functions(double p, double R, const Grid& grid, double horizon,
                                      const std::vector<double>& center) {
  if (!(p > 1.0)) throw std::invalid_argument("build_test_functions: p must exceed 1");
  if (!(R >= 1.0)) throw std::invalid_argument("build_test_functions: R must be >= 1");
  if (R > 0.25 * grid.box_length()) {
    throw std::invalid_argument("build_test_functions: R = " + std::to_string(R) +
                                " exceeds box_length/4 = " + std::to_string(0.25 * grid.box_length()));
  }
  const double pc = p / (p - 1.0);
  TestFunctionPair tf{0, R, p, horizon, {}, center, RealField(grid), RealField(grid), 0.0, 0.0, 1, {}};
  tf.ell = static_cast<int>(std::ceil(2.0 * pc)) + 1;
  tf.profile.ell = tf.ell;

  const int n = grid.dim();
  fill_radial(tf.profile, grid, center, R, tf.phi, tf.lap_phi);
  {
    const Eigen::ArrayXd r = periodic_distance(grid, center);
    for (Eigen::Index i = 0; i < grid.size(); ++i) {
      const double y = r[i] / R;
      tf.phi_bound = std::max(tf.phi_bound, eta_term2(tf.profile, y, pc, y > 0.5 ? (n - 1) / y : 0.0));
    }
  }
  // At least kQuadraturePoints cells per R, within a memory cap.
  const double cells_per_r = R / grid.spacing();
  while (cells_per_r * tf.quadrature_factor < kQuadraturePoints &&
         static_cast<double>(grid.size()) * std::pow(2.0 * tf.quadrature_factor, n) <= kMaxQuadratureSize) {
    tf.quadrature_factor *= 2;
  }
  const Grid fine(n, grid.points() * tf.quadrature_factor, grid.box_length());
  tf.phi_fine = RealField(fine);
  RealField lap_fine(fine);
  fill_radial(tf.profile, fine, center, R, tf.phi_fine, lap_fine);
  // Time profile sampled with as many points per unit as the grid has per R.
  const int samples = std::max(16, static_cast<int>(std::ceil(R / grid.spacing())));
  for (int j = 0; j <= samples; ++j) {
    const double x = 0.5 + 0.5 * j / samples;
    tf.eta_bound = std::max(tf.eta_bound, eta_term1(tf.profile, x, pc) + eta_term2(tf.profile, x, pc, 0.0));
  }
  return tf;
}

double holder_constant(const TestFunctionPair& tf, int n, int cells) {
  const double pc = tf.conjugate();
  const double inv_r2 = 1.0 / (tf.R * tf.R);
  const CutoffProfile& c = tf.profile;
  const double h = 1.0 / cells;
  std::vector<double> a(cells), a1(cells), a2(cells), b(cells), b2(cells), w(cells);
  for (int i = 0; i < cells; ++i) {
    const double x = (i + 0.5) * h;
    a[i] = c.value(x);
    a1[i] = c.ratio1(x);
    a2[i] = c.ratio2(x);
    b[i] = c.value(x);
    b2[i] = c.ratio2(x) + (x > 0.5 ? (n - 1) / x * c.ratio1(x) : 0.0);
    w[i] = std::pow(x, n - 1);
  }
  // Phi^{-p'/p} |L Phi|^{p'} = Phi |R^{-4} a2 - R^{-2} a1 - R^{-2} b2|^{p'};
  // the common R^{-2} is pulled out into the prefactor.
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) {
    if (a[i] == 0.0) continue;
    for (int j = 0; j < cells; ++j) {
      if (b[j] == 0.0) continue;
      const double inner = inv_r2 * a2[i] - a1[i] - b2[j];
      sum += a[i] * b[j] * std::pow(std::abs(inner), pc) * w[j];
    }
  }
  return std::pow(sphere_area(n) * sum * h * h, 1.0 / pc);
}

double data_term(const SpectralState& initial, const TestFunctionPair& tf) {
  require_same_grid(initial.uhat.grid, tf.phi.grid, "data_term");
  const RealField w = interpolate(initial.uhat + initial.uthat, tf.quadrature_factor);
  return (w.values * tf.phi_fine.values).sum() * w.grid.cell_volume();
}

BlowupFunctional blowup_functional(const SimResult& result, const TestFunctionPair& tf,
                                   const ModelParams& params) {
  const auto& snaps = result.snapshots;
  const double horizon = tf.R * tf.R;
  if (snaps.empty() || snaps.front().t != 0.0) {
    throw std::invalid_argument("blowup_functional: run has no snapshots starting at t = 0");
  }
  if (snaps.back().t < horizon * (1.0 - 1e-12)) {
    throw std::invalid_argument("blowup_functional: snapshots end at t = " + std::to_string(snaps.back().t) +
                                " before R^2 = " + std::to_string(horizon));
  }
  const double max_gap = horizon / 200.0;
  for (std::size_t i = 1; i < snaps.size() && snaps[i - 1].t < horizon; ++i) {
    if (snaps[i].t - snaps[i - 1].t > max_gap * (1.0 + 1e-9)) {
      throw std::invalid_argument("blowup_functional: snapshot stride " +
                                  std::to_string(snaps[i].t - snaps[i - 1].t) +
                                  " too coarse; required stride <= R^2/200 = " + std::to_string(max_gap));
    }
  }
  const double dx = tf.phi_fine.grid.cell_volume();

  std::vector<double> times, power_density, pairing;
  for (const auto& s : snaps) {
    const double eta = tf.eta(s.t);
    const double eta1 = tf.eta_dt(s.t);
    const double eta2 = tf.eta_dtt(s.t);
    // int u Delta Phi = int (Delta u) Phi: the smoother integrand keeps the
    // rectangle rule at fourth order across the kinks of phi'''.
    const SpectralField uhat = to_spectral(RealField(tf.phi.grid, s.u));
    const RealField u = interpolate(uhat, tf.quadrature_factor);
    const RealField lap_u =
        interpolate(apply_multiplier(uhat, [](double xi) { return -xi * xi; }), tf.quadrature_factor);
    const Eigen::ArrayXd abs_pow = (u.values * u.values).pow(0.5 * params.p);
    times.push_back(s.t);
    power_density.push_back(eta == 0.0 ? 0.0 : eta * (abs_pow * tf.phi_fine.values).sum() * dx);
    const double u_phi = (u.values * tf.phi_fine.values).sum() * dx;
    const double lap_u_phi = (lap_u.values * tf.phi_fine.values).sum() * dx;
    pairing.push_back((eta2 - eta1) * u_phi - eta * lap_u_phi);
    if (s.t >= horizon) break;
  }
  auto trapezoid = [&](const std::vector<double>& f) {
    double acc = 0.0;
    for (std::size_t i = 1; i < times.size(); ++i) acc += 0.5 * (times[i] - times[i - 1]) * (f[i] + f[i - 1]);
    return acc;
  };

  BlowupFunctional out;
  out.I_R = trapezoid(power_density);
  out.data_term = data_term(result.initial_state, tf);
  out.holder_constant = holder_constant(tf, params.n);
  const double pc = tf.conjugate();
  out.rhs_bound = std::pow(out.I_R, 1.0 / params.p) * std::pow(tf.R, (params.n + 2) / pc - 2.0) *
                  out.holder_constant;
  out.weak_lhs = out.I_R + out.data_term;
  out.weak_rhs = trapezoid(pairing);
  return out;
}

}  // namespace dwlab
