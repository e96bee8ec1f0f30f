#pragma once

#include "dwlab/fields.hpp"

#include <cmath>
#include <utility>

namespace dwlab {

/// Fourier symbol of the damped wave kernel and its time derivative.
/// khat solves v'' + v' + |xi|^2 v = 0 with v(0) = 0, v'(0) = 1.
template <typename Scalar>
struct KernelValue {
  Scalar k;
  Scalar dk;
};

/// Entire functions S(z) = sinh(sqrt z)/sqrt z and C(z) = cosh(sqrt z),
/// continued to z < 0 as sin/cos of sqrt(-z).
template <typename Scalar>
std::pair<Scalar, Scalar> stable_sc(Scalar z) {
  using std::abs, std::sqrt, std::sinh, std::cosh, std::sin, std::cos;
  if (abs(z) < Scalar(1e-4)) {
    // S = sum z^j/(2j+1)!, C = sum z^j/(2j)!, j = 0..4
    Scalar s = 1, c = 1, term_s = 1, term_c = 1;
    for (int j = 1; j <= 4; ++j) {
      term_s *= z / Scalar((2 * j) * (2 * j + 1));
      term_c *= z / Scalar((2 * j - 1) * (2 * j));
      s += term_s;
      c += term_c;
    }
    return {s, c};
  }
  if (z > 0) {
    const Scalar r = sqrt(z);
    return {sinh(r) / r, cosh(r)};
  }
  const Scalar w = sqrt(-z);
  return {sin(w) / w, cos(w)};
}

/// Kernel symbol at time t and squared frequency xi2.
///
/// In the growing branch (xi2 < 1/4, t*sqrt(1/4 - xi2) >= 1) the exponentials
/// are fused as exp(-t*xi2/(r + 1/2)) and exp(-t*(r + 1/2)), r = sqrt(1/4 - xi2),
/// so neither overflow nor the cancellation r - 1/2 occurs.
template <typename Scalar>
KernelValue<Scalar> khat(Scalar t, Scalar xi2) {
  using std::exp, std::sqrt;
  const Scalar quarter = Scalar(1) / Scalar(4);
  const Scalar half = Scalar(1) / Scalar(2);
  const Scalar gap = quarter - xi2;
  const Scalar z = t * t * gap;
  if (z >= Scalar(1)) {
    const Scalar r = sqrt(gap);
    const Scalar grow = exp(-t * xi2 / (r + half));
    const Scalar fall = exp(-t * (r + half));
    const Scalar k = (grow - fall) / (2 * r);
    const Scalar dk = -grow * xi2 / (r * (1 + 2 * r)) + fall * (1 + 2 * r) / (4 * r);
    return {k, dk};
  }
  const auto [s, c] = stable_sc(z);
  const Scalar damp = exp(-half * t);
  return {t * damp * s, damp * (c - half * t * s)};
}

/// Per-mode linear propagator over a fixed time t:
///   uhat(t)  = (k + dk) uhat0 + k uhat1
///   uthat(t) = -xi2 k uhat0   + dk uhat1
struct LinearPropagator {
  Grid grid;
  double t;
  Eigen::ArrayXd k;
  Eigen::ArrayXd dk;
  Eigen::ArrayXd u_from_u;
  Eigen::ArrayXd v_from_u;

  LinearPropagator(const Grid& grid, double t);

  std::pair<SpectralField, SpectralField> apply(const SpectralField& u, const SpectralField& v) const;
};

std::pair<SpectralField, SpectralField> linear_solution(const SpectralField& u0hat,
                                                        const SpectralField& u1hat, double t);

}  // namespace dwlab
