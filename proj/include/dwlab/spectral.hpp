#pragma once

#include "dwlab/fields.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dwlab {

SpectralField to_spectral(const RealField& f);
RealField from_spectral(const SpectralField& f);

/// Coefficient-wise product with symbol(|xi|).
///
/// The zero mode is multiplied by symbol(0) when that is finite and cleared
/// otherwise (negative-order symbols act on fields modulo constants). A
/// non-finite symbol value at a nonzero wavenumber is an error.
template <typename Symbol>
SpectralField apply_multiplier(const SpectralField& f, Symbol&& symbol) {
  SpectralField out(f.grid);
  const auto& xi = f.grid.xi_abs();
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    const double s = symbol(xi[i]);
    if (!std::isfinite(s)) {
      if (xi[i] == 0.0) {
        out.coeffs[i] = 0.0;
        continue;
      }
      throw std::domain_error("apply_multiplier: symbol is not finite at |xi| = " +
                              std::to_string(xi[i]));
    }
    out.coeffs[i] = s * f.coeffs[i];
  }
  return out;
}

/// Symbol |xi|^order.
struct FractionalPower {
  double order;
  double operator()(double xi) const {
    if (order == 0.0) return 1.0;
    return std::pow(xi, order);
  }
};

/// Result of a dealiased |u|^p evaluation in spectral form.
struct PowerResult {
  SpectralField power;
  /// max |u| over the points of the original (unpadded) grid.
  double sup_norm = 0.0;
  bool finite = true;
};

/// (u^2)^(p/2) evaluated on the 2x zero-padded grid and truncated back;
/// Nyquist modes of the result are cleared.
PowerResult power_dealiased_spectral(const SpectralField& u, double p);

RealField power_dealiased(const RealField& u, double p);

/// Trigonometric interpolation onto the grid with `factor` times the points
/// per axis (factor a power of two); Nyquist modes are dropped.
RealField interpolate(const SpectralField& f, int factor);

/// L2 norm computed from coefficients: sqrt(volume * sum |c_k|^2).
double spectral_l2_norm(const SpectralField& f);

}  // namespace dwlab
