#pragma once

#include "dwlab/fields.hpp"

#include <cstdint>
#include <functional>
#include <limits>
#include <string>
#include <vector>

namespace dwlab {

/// omega(theta, a) of the fractional Gagliardo-Nirenberg inequality.
double gn_omega(double theta, double a, double p, double p0, double p1, int n);

/// ||u||_{Hdot^theta_p} / (||u||_{L^p0}^{1-omega} ||u||_{Hdot^a_p1}^omega).
double check_gn(const RealField& u, double theta, double a, double p, double p0, double p1);

/// || |u|^p ||_{Hdot^s_r} / (||u||_{L^r1}^{p-1} ||u||_{Hdot^s_r2}); 0 for u = 0.
double check_chain_rule(const RealField& u, double p, double s, double r, double r1, double r2);

/// ||phi||_{Hdot^{-gamma}_theta2} / ||phi||_{L^theta1}, 1/theta2 = 1/theta1 - gamma/n.
double check_hls(const RealField& phi, double gamma, double theta1);

/// Multiplier |xi|^alpha exp(-g(|xi|) t) chi_L(|xi|) against the predicted
/// (1+t)^{-n/beta (1/m - 1/q) - alpha/beta} ||chi_L(|D|) h||_{L^m} envelope.
struct KernelDecaySpec {
  double alpha = 0.0;
  std::function<double(double)> g = [](double xi) { return xi * xi; };
  double beta = 2.0;
  double m = 1.0;
  double q = 2.0;
  /// chi_L = 1 for |xi| <= cutoff/2, 0 for |xi| >= cutoff.
  double cutoff = 0.25;

  void validate(int n) const;
  double envelope_exponent(int n) const;
};

struct KernelDecayResult {
  std::vector<double> lhs;
  std::vector<double> ratios;
  double data_norm = 0.0;
};

KernelDecayResult check_kernel_decay(const RealField& h, const KernelDecaySpec& spec,
                                     const std::vector<double>& times);

/// Sum of 1-5 modulated Gaussians drawn from (seed, index); the parameters do
/// not depend on the grid, so the same sample can be evaluated on a ladder.
RealField random_sample(std::uint64_t seed, std::uint64_t index, const Grid& grid, bool zero_mean = true);

struct InequalityReport {
  std::string name;
  std::uint64_t seed = 0;
  int samples = 0;
  double max_ratio = 0.0;
  double ratio_at_refined_grid = 0.0;
  int violation_count = 0;
  int nonfinite_count = 0;
};

struct CampaignOptions {
  /// Grids of the ladder for the multi-bump inequalities (same box, doubling points).
  std::vector<Grid> ladder;
  /// Ladder for the low-frequency kernel check (needs a long box).
  std::vector<Grid> kernel_ladder;
  std::vector<double> kernel_times{1.0, 10.0, 100.0, 1000.0};
  double kernel_cutoff = 0.25;
  double cap = std::numeric_limits<double>::infinity();
  unsigned threads = 0;

  static CampaignOptions defaults();
};

struct InequalityCase {
  std::string name;
  bool kernel_grid;  ///< evaluated on kernel_ladder with non-zero-mean samples
  std::function<double(const RealField&)> ratio;
};

/// The fixed exponent choices exercised by run_campaign.
std::vector<InequalityCase> campaign_cases(const CampaignOptions& options);

/// Evaluates every inequality on `count` samples and every ladder level.
std::vector<InequalityReport> run_campaign(std::uint64_t seed, int count,
                                           const CampaignOptions& options = CampaignOptions::defaults());

}  // namespace dwlab
