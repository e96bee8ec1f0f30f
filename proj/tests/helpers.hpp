#pragma once

#include "dwlab/fields.hpp"

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace testing {

inline dwlab::RealField random_field(const dwlab::Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  dwlab::RealField f(g);
  for (Eigen::Index i = 0; i < g.size(); ++i) f.values[i] = normal(rng);
  return f;
}

inline dwlab::RealField cos_mode(const dwlab::Grid& g, int mode, double amplitude = 1.0) {
  const double kappa = 2.0 * std::numbers::pi * mode / g.box_length();
  return dwlab::RealField(g, amplitude * (kappa * g.coordinate(0)).cos());
}

inline double rel_err(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace testing
