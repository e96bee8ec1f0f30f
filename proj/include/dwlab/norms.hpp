#pragma once

#include "dwlab/fields.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <limits>
#include <vector>

namespace dwlab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Problem tuple (n, m, gamma, p, s, eps).
struct ModelParams {
  int n = 1;
  double m = 2.0;
  double gamma = 0.0;
  double p = 2.0;
  double s = 2.0;
  double eps = 1.0;

  /// Throws std::invalid_argument unless m in (1,2], 0 <= gamma < n(m-1)/m,
  /// p > 1, s in (1,2], eps >= 0.
  void validate() const;

  double gamma_limit() const { return n * (m - 1.0) / m; }
  /// n/2 (1/m - 1/2)
  double lm_l2_gap() const { return 0.5 * n * (1.0 / m - 0.5); }
};

/// Quadrature-weighted L^q norm of raw values; q = inf gives max |value|.
template <typename Derived>
double lp_norm(const Eigen::ArrayBase<Derived>& values, double q, double cell_volume) {
  if (values.size() == 0) return 0.0;
  if (std::isinf(q)) return values.abs().maxCoeff();
  if (q == 2.0) return std::sqrt(cell_volume * values.abs2().sum());
  if (q == 1.0) return cell_volume * values.abs().sum();
  // Factor out the peak to keep |v|^q in range for large q.
  const double peak = values.abs().maxCoeff();
  if (peak == 0.0) return 0.0;
  const double sum = (values.abs() / peak).pow(q).sum();
  return peak * std::pow(cell_volume * sum, 1.0 / q);
}

double lp_norm(const RealField& f, double q);

/// ||F^{-1}(|xi|^a fhat)||_{L^q}; a = 0 is exactly lp_norm, a < 0 drops the
/// zero mode.
double sobolev_norm(const RealField& f, double a, double q);
double sobolev_norm(const SpectralField& f, double a, double q);

/// ||F^{-1}(|xi|^a fhat)||_{L^2} from the coefficients via Parseval.
double sobolev_l2_spectral(const SpectralField& f, double a);

/// Time-stamped norms of a trajectory.
struct NormSeries {
  std::vector<double> times;
  std::vector<double> l2;
  std::vector<double> hs_dot;
  std::vector<double> lm;
  std::vector<double> supnorm;
  /// Weighted L2, Hdot^s and L^m terms of the X(T) functional.
  std::vector<double> w_l2;
  std::vector<double> w_hs;
  std::vector<double> w_lm;
  /// Y(T)-type weighted size of |u|^p on the eta lattice (diagnostic).
  std::vector<double> y_nonlinear;

  std::size_t size() const { return times.size(); }
  /// Equal lengths and strictly increasing times.
  bool consistent() const;
};

struct WeightedNorms {
  double x_value = 0.0;
  std::vector<double> w_l2;
  std::vector<double> w_hs;
  std::vector<double> w_lm;
};

/// Applies the X(T) weights (1+t)^{a}, (1+t)^{a + s/2}, (1+t)^{gamma/2},
/// a = n/2(1/m - 1/2) + gamma/2, and takes the sup of their sum.
WeightedNorms weighted_tracker(const NormSeries& series, const ModelParams& params);

/// Exponents eta_1 = max(1, m/p), (eta_1 + 2)/2 and 2 standing in for the
/// continuum sup in the Y(T) functional.
std::vector<double> y_eta_lattice(const ModelParams& params);

/// Weighted size of the nonlinearity |u|^p at time t in the Y(T) functional,
/// with the sup over eta restricted to y_eta_lattice.
double y_weighted(const RealField& nonlinearity, double t, const ModelParams& params);

}  // namespace dwlab
