#include "dwlab/propagator.hpp"

#include <stdexcept>

namespace dwlab {

LinearPropagator::LinearPropagator(const Grid& g, double time)
    : grid(g), t(time), k(g.size()), dk(g.size()), u_from_u(g.size()), v_from_u(g.size()) {
  if (!(time >= 0.0) || !std::isfinite(time)) {
    throw std::invalid_argument("LinearPropagator: time must be finite and nonnegative");
  }
  const auto& xi2 = g.xi2();
  for (Eigen::Index i = 0; i < xi2.size(); ++i) {
    const auto kv = khat(time, xi2[i]);
    k[i] = kv.k;
    dk[i] = kv.dk;
  }
  u_from_u = k + dk;
  v_from_u = -xi2 * k;
}

std::pair<SpectralField, SpectralField> LinearPropagator::apply(const SpectralField& u,
                                                                const SpectralField& v) const {
  require_same_grid(u.grid, grid, "LinearPropagator::apply");
  require_same_grid(v.grid, grid, "LinearPropagator::apply");
  if (t == 0.0) return {u, v};
  SpectralField uo(grid, u_from_u * u.coeffs + k * v.coeffs);
  SpectralField vo(grid, v_from_u * u.coeffs + dk * v.coeffs);
  return {std::move(uo), std::move(vo)};
}

std::pair<SpectralField, SpectralField> linear_solution(const SpectralField& u0hat,
                                                        const SpectralField& u1hat, double t) {
  require_same_grid(u0hat.grid, u1hat.grid, "linear_solution");
  return LinearPropagator(u0hat.grid, t).apply(u0hat, u1hat);
}

}  // namespace dwlab
