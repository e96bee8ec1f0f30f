#pragma once

namespace dwlab {

/// Unit cutoff: 1 on [0, 1/2], 0 on [1, inf), (1 - q(2x - 1))^ell between,
/// q the quintic smoothstep.
struct CutoffProfile {
  int ell = 5;

  double value(double x) const;
  double d1(double x) const;
  double d2(double x) const;
  /// psi'/psi and psi''/psi (0 where psi = 1; undefined where psi = 0).
  double ratio1(double x) const;
  double ratio2(double x) const;
};

}  // namespace dwlab
