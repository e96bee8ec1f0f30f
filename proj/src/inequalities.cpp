#include "dwlab/inequalities.hpp"

#include "dwlab/cutoff.hpp"
#include "dwlab/lab.hpp"
#include "dwlab/norms.hpp"
#include "dwlab/spectral.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace dwlab {

double gn_omega(double theta, double a, double p, double p0, double p1, int n) {
  return (1.0 / p0 - 1.0 / p + theta / n) / (1.0 / p0 - 1.0 / p1 + a / n);
}

double check_gn(const RealField& u, double theta, double a, double p, double p0, double p1) {
  const int n = u.grid.dim();
  if (!(a > 0.0) || !(theta >= 0.0 && theta < a)) {
    throw std::invalid_argument("check_gn: need a > 0 and 0 <= theta < a");
  }
  for (double e : {p, p0, p1}) {
    if (!(e > 1.0) || !std::isfinite(e)) throw std::invalid_argument("check_gn: exponents must lie in (1, inf)");
  }
  const double omega = gn_omega(theta, a, p, p0, p1, n);
  if (!(omega >= theta / a - 1e-14 && omega <= 1.0 + 1e-14)) {
    throw std::invalid_argument("check_gn: omega = " + std::to_string(omega) + " outside [theta/a, 1]");
  }
  const double lhs = sobolev_norm(u, theta, p);
  const double low = lp_norm(u, p0);
  const double high = sobolev_norm(u, a, p1);
  if (lhs == 0.0) return 0.0;
  return lhs / (std::pow(low, 1.0 - omega) * std::pow(high, omega));
}

double check_chain_rule(const RealField& u, double p, double s, double r, double r1, double r2) {
  if (!(s > 0.0)) throw std::invalid_argument("check_chain_rule: s must be positive");
  if (!(p > std::ceil(s))) throw std::invalid_argument("check_chain_rule: need p > ceil(s)");
  for (double e : {r, r1, r2}) {
    if (!(e > 1.0) || !std::isfinite(e)) throw std::invalid_argument("check_chain_rule: exponents must lie in (1, inf)");
  }
  if (std::abs(1.0 / r - ((p - 1.0) / r1 + 1.0 / r2)) > 1e-12) {
    throw std::invalid_argument("check_chain_rule: need 1/r = (p-1)/r1 + 1/r2");
  }
  if (u.sup_norm() == 0.0) return 0.0;
  const double lhs = sobolev_norm(power_dealiased(u, p), s, r);
  const double rhs = std::pow(lp_norm(u, r1), p - 1.0) * sobolev_norm(u, s, r2);
  return lhs / rhs;
}

double check_hls(const RealField& phi, double gamma, double theta1) {
  const int n = phi.grid.dim();
  if (!(gamma >= 0.0 && gamma < n)) throw std::invalid_argument("check_hls: need 0 <= gamma < n");
  const double inv2 = 1.0 / theta1 - gamma / n;
  if (!(theta1 > 1.0) || !(inv2 > 0.0)) {
    throw std::invalid_argument("check_hls: need 1 < theta1 <= theta2 < inf");
  }
  const double theta2 = 1.0 / inv2;
  const double rhs = lp_norm(phi, theta1);
  if (rhs == 0.0) return 0.0;
  return sobolev_norm(phi, -gamma, theta2) / rhs;
}

void KernelDecaySpec::validate(int n) const {
  if (!(alpha > -1.0)) throw std::invalid_argument("kernel decay: alpha must exceed -1");
  if (!(beta > 0.0)) throw std::invalid_argument("kernel decay: beta must be positive");
  if (!(m >= 1.0 && m <= q)) throw std::invalid_argument("kernel decay: need 1 <= m <= q");
  if (alpha == 0.0 && !(m < q)) throw std::invalid_argument("kernel decay: need m < q when alpha = 0");
  if (alpha < 0.0 && 1.0 / m - 1.0 / q < -alpha / n) {
    throw std::invalid_argument("kernel decay: need 1/m - 1/q >= -alpha/n when alpha < 0");
  }
  if (!(cutoff > 0.0)) throw std::invalid_argument("kernel decay: cutoff must be positive");
}

double KernelDecaySpec::envelope_exponent(int n) const {
  const double inv_q = std::isinf(q) ? 0.0 : 1.0 / q;
  return -n / beta * (1.0 / m - inv_q) - alpha / beta;
}

KernelDecayResult check_kernel_decay(const RealField& h, const KernelDecaySpec& spec,
                                     const std::vector<double>& times) {
  const int n = h.grid.dim();
  spec.validate(n);
  const CutoffProfile chi{5};
  const SpectralField hhat = to_spectral(h);
  const SpectralField low = apply_multiplier(hhat, [&](double xi) { return chi.value(xi / spec.cutoff); });
  KernelDecayResult out;
  out.data_norm = lp_norm(from_spectral(low), spec.m);
  const double expo = spec.envelope_exponent(n);
  for (double t : times) {
    const SpectralField evolved = apply_multiplier(low, [&](double xi) {
      const double f = spec.alpha == 0.0 ? 1.0 : std::pow(xi, spec.alpha);
      return f * std::exp(-spec.g(xi) * t);
    });
    const double lhs = lp_norm(from_spectral(evolved), spec.q);
    out.lhs.push_back(lhs);
    out.ratios.push_back(out.data_norm > 0.0 ? lhs / (std::pow(1.0 + t, expo) * out.data_norm) : 0.0);
  }
  return out;
}

RealField random_sample(std::uint64_t seed, std::uint64_t index, const Grid& grid, bool zero_mean) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int bumps = 1 + static_cast<int>(unit(rng) * 5.0) % 5;
  const double spread = std::min(0.25 * grid.box_length(), 16.0);
  RealField f(grid);
  std::vector<Eigen::ArrayXd> coords;
  for (int a = 0; a < grid.dim(); ++a) coords.push_back(grid.coordinate(a));
  for (int b = 0; b < bumps; ++b) {
    Eigen::ArrayXd r2 = Eigen::ArrayXd::Zero(grid.size());
    Eigen::ArrayXd phase = Eigen::ArrayXd::Zero(grid.size());
    const double width = 1.0 + 2.0 * unit(rng);
    const double amplitude = 2.0 * unit(rng) - 1.0;
    const double offset = 2.0 * std::numbers::pi * unit(rng);
    for (int a = 0; a < grid.dim(); ++a) {
      const double c = spread * (2.0 * unit(rng) - 1.0);
      const double k = 1.5 * unit(rng);
      Eigen::ArrayXd d = coords[a] - c;
      d = d - grid.box_length() * (d / grid.box_length()).round();
      r2 += d.square();
      phase += k * d;
    }
    f.values += amplitude * (-r2 / (width * width)).exp() * (phase + offset).cos();
  }
  if (zero_mean) f.values -= f.values.mean();
  return f;
}

CampaignOptions CampaignOptions::defaults() {
  CampaignOptions o;
  o.ladder = {Grid(1, 256, 64.0), Grid(1, 512, 64.0)};
  o.kernel_ladder = {Grid(1, 4096, 4096.0), Grid(1, 8192, 4096.0)};
  return o;
}

std::vector<InequalityCase> campaign_cases(const CampaignOptions& options) {
  std::vector<InequalityCase> cases;
  cases.push_back({"gn_l2", false, [](const RealField& u) { return check_gn(u, 0.5, 1.0, 2.0, 2.0, 2.0); }});
  cases.push_back({"gn_mixed", false, [](const RealField& u) { return check_gn(u, 0.5, 1.5, 3.0, 1.5, 2.0); }});
  cases.push_back({"chain_rule", false,
                   [](const RealField& u) { return check_chain_rule(u, 3.0, 1.0, 1.2, 6.0, 2.0); }});
  cases.push_back({"hls", false, [](const RealField& u) { return check_hls(u, 0.4, 1.5); }});
  cases.push_back({"kernel_decay_heat", true, [times = options.kernel_times, cutoff = options.kernel_cutoff](const RealField& h) {
                     KernelDecaySpec spec;
                     spec.cutoff = cutoff;
                     const auto res = check_kernel_decay(h, spec, times);
                     double worst = 0.0;
                     for (double r : res.ratios) worst = std::isfinite(r) ? std::max(worst, r) : r;
                     return worst;
                   }});
  return cases;
}

std::vector<InequalityReport> run_campaign(std::uint64_t seed, int count, const CampaignOptions& options) {
  if (count < 1) throw std::invalid_argument("run_campaign: count must be >= 1");
  if (options.ladder.empty() || options.kernel_ladder.empty()) {
    throw std::invalid_argument("run_campaign: grid ladders must not be empty");
  }
  const auto cases = campaign_cases(options);
  std::vector<InequalityReport> reports;
  for (const auto& c : cases) {
    const auto& ladder = c.kernel_grid ? options.kernel_ladder : options.ladder;
    // ratios[level][sample]
    std::vector<std::vector<double>> ratios(ladder.size(), std::vector<double>(count, 0.0));
    parallel_for(static_cast<std::size_t>(count), options.threads, [&](std::size_t i) {
      for (std::size_t level = 0; level < ladder.size(); ++level) {
        const RealField u = random_sample(seed, i, ladder[level], !c.kernel_grid);
        ratios[level][i] = c.ratio(u);
      }
    });
    InequalityReport rep;
    rep.name = c.name;
    rep.seed = seed;
    rep.samples = count;
    for (std::size_t level = 0; level < ladder.size(); ++level) {
      double worst = 0.0;
      for (double r : ratios[level]) {
        if (!std::isfinite(r)) {
          ++rep.nonfinite_count;
          continue;
        }
        worst = std::max(worst, r);
        if (level == 0 && r > options.cap) ++rep.violation_count;
      }
      if (level == 0) rep.max_ratio = worst;
      if (level == 1 || ladder.size() == 1) rep.ratio_at_refined_grid = worst;
    }
    reports.push_back(rep);
  }
  return reports;
}

}  // namespace dwlab
