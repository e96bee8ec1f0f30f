#pragma once

#include "dwlab/grid.hpp"

#include <Eigen/Dense>

#include <complex>

namespace dwlab {

using Complex = std::complex<double>;

struct RealField {
  Grid grid;
  Eigen::ArrayXd values;

  /// Empty placeholder on a minimal grid.
  RealField() : grid(1, 8, 1.0) {}
  explicit RealField(const Grid& g) : grid(g), values(Eigen::ArrayXd::Zero(g.size())) {}
  RealField(const Grid& g, Eigen::ArrayXd v);

  bool all_finite() const { return values.isFinite().all(); }
  double sup_norm() const { return values.size() ? values.abs().maxCoeff() : 0.0; }
};

/// Fourier-series coefficients: f(x) = sum_k coeffs[k] exp(i xi_k . x).
struct SpectralField {
  Grid grid;
  Eigen::ArrayXcd coeffs;

  SpectralField() : grid(1, 8, 1.0) {}
  explicit SpectralField(const Grid& g) : grid(g), coeffs(Eigen::ArrayXcd::Zero(g.size())) {}
  SpectralField(const Grid& g, Eigen::ArrayXcd c);

  bool all_finite() const { return coeffs.real().isFinite().all() && coeffs.imag().isFinite().all(); }
};

/// Index of the mode with wavenumber -xi_k (Nyquist modes map to themselves).
Eigen::Index mirror_index(const Grid& grid, Eigen::Index linear);

/// Largest |c_k - conj(c_{-k})| over all modes, ignoring Nyquist modes.
double conjugate_symmetry_defect(const SpectralField& f);

RealField operator*(double a, const RealField& f);
RealField operator+(const RealField& a, const RealField& b);
SpectralField operator*(double a, const SpectralField& f);
SpectralField operator+(const SpectralField& a, const SpectralField& b);
SpectralField operator-(const SpectralField& a, const SpectralField& b);

}  // namespace dwlab
