#include "dwlab/norms.hpp"

#include "dwlab/spectral.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace dwlab {

void ModelParams::validate() const {
  if (n < 1) throw std::invalid_argument("ModelParams: n must be >= 1");
  if (!(m > 1.0 && m <= 2.0)) throw std::invalid_argument("ModelParams: m must lie in (1, 2]");
  if (!(gamma >= 0.0 && gamma < gamma_limit())) {
    throw std::invalid_argument("ModelParams: gamma must lie in [0, n(m-1)/m) = [0, " +
                                std::to_string(gamma_limit()) + ")");
  }
  if (!(p > 1.0) || !std::isfinite(p)) throw std::invalid_argument("ModelParams: p must exceed 1");
  if (!(s > 1.0 && s <= 2.0)) throw std::invalid_argument("ModelParams: s must lie in (1, 2]");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw std::invalid_argument("ModelParams: eps must be >= 0");
}

double lp_norm(const RealField& f, double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("lp_norm: exponent must be >= 1");
  return lp_norm(f.values, q, f.grid.cell_volume());
}

double sobolev_norm(const SpectralField& f, double a, double q) {
  return lp_norm(from_spectral(apply_multiplier(f, FractionalPower{a})), q);
}

double sobolev_norm(const RealField& f, double a, double q) {
  if (a == 0.0) return lp_norm(f, q);
  return sobolev_norm(to_spectral(f), a, q);
}

double sobolev_l2_spectral(const SpectralField& f, double a) {
  if (a == 0.0) return spectral_l2_norm(f);
  const auto& xi = f.grid.xi_abs();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < xi.size(); ++i) {
    if (xi[i] == 0.0) continue;
    sum += std::pow(xi[i], 2.0 * a) * std::norm(f.coeffs[i]);
  }
  return std::sqrt(f.grid.volume() * sum);
}

bool NormSeries::consistent() const {
  const std::size_t n = times.size();
  for (const auto* v : {&l2, &hs_dot, &lm, &supnorm}) {
    if (v->size() != n) return false;
  }
  for (const auto* v : {&w_l2, &w_hs, &w_lm, &y_nonlinear}) {
    if (!v->empty() && v->size() != n) return false;
  }
  for (std::size_t i = 1; i < n; ++i) {
    if (!(times[i] > times[i - 1])) return false;
  }
  return true;
}

WeightedNorms weighted_tracker(const NormSeries& series, const ModelParams& params) {
  if (series.size() == 0) throw std::invalid_argument("weighted_tracker: empty series");
  const double a = params.lm_l2_gap() + 0.5 * params.gamma;
  const double a_hs = a + 0.5 * params.s;
  const double a_lm = 0.5 * params.gamma;
  WeightedNorms out;
  out.x_value = 0.0;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double base = 1.0 + series.times[i];
    out.w_l2.push_back(std::pow(base, a) * series.l2[i]);
    out.w_hs.push_back(std::pow(base, a_hs) * series.hs_dot[i]);
    out.w_lm.push_back(std::pow(base, a_lm) * series.lm[i]);
    out.x_value = std::max(out.x_value, out.w_l2.back() + out.w_hs.back() + out.w_lm.back());
  }
  return out;
}

std::vector<double> y_eta_lattice(const ModelParams& params) {
  const double eta1 = std::max(1.0, params.m / params.p);
  return {eta1, 0.5 * (eta1 + 2.0), 2.0};
}

double y_weighted(const RealField& nonlinearity, double t, const ModelParams& params) {
  const double n = params.n, m = params.m, p = params.p, g = params.gamma, s = params.s;
  const double base = 1.0 + t;
  const double hs = sobolev_norm(nonlinearity, s - 1.0, 2.0);
  double value = std::pow(base, 0.5 * n * (p / m - 0.5) + 0.5 * p * g + 0.5 * (s - 1.0)) * hs;
  double best = 0.0;
  for (double eta : y_eta_lattice(params)) {
    best = std::max(best, std::pow(base, 0.5 * n * (p / m - 1.0 / eta) + 0.5 * p * g) *
                              lp_norm(nonlinearity, eta));
  }
  return value + best;
}

}  // namespace dwlab
