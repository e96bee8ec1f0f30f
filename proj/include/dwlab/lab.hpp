#pragma once

#include "dwlab/cutoff.hpp"
#include "dwlab/timestepper.hpp"

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace dwlab {

/// Exponents attached to a parameter tuple.
struct ExponentTable {
  double p_crit;      ///< 1 + 2m/(n + m gamma)
  double p1;          ///< 1 + m gamma / n
  double gamma_bar;   ///< positive root of m x^2 + n x - 2n
  double beta_m;      ///< (n-1)(1/m - 1/2)
  double decay_l2;    ///< -n/2 (1/m - 1/2) - gamma/2
  double decay_hs;    ///< decay_l2 - s/2
  double decay_lm;    ///< -gamma/2
  /// -2(p-1)/(2 - (n/m + gamma)(p-1)), only for p < p_crit.
  std::optional<double> lifespan_exp;
};

double critical_exponent(int n, double m, double gamma);
double gamma_bar(int n, double m);
ExponentTable exponent_table(const ModelParams& params);

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  std::size_t samples = 0;
};

/// Ordinary least squares y = intercept + slope * x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

enum class NormSelector { l2, hs_dot, lm, supnorm };
NormSelector parse_norm_selector(std::string_view name);
std::string_view to_string(NormSelector which);

struct DecayFit : LineFit {
  double t_a = 0.0;
  double t_b = 0.0;
};

/// Least-squares line through (log(1+t), log norm) for samples with t in [t_a, t_b].
/// Needs at least 10 samples, all positive.
DecayFit fit_decay(const NormSeries& series, NormSelector which, double t_a, double t_b);

/// Default fit window [t_max/10, 0.8 t_max].
std::pair<double, double> default_decay_window(double t_max);

struct LifespanRecord {
  double eps = 0.0;
  double p = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  SimStatus status = SimStatus::completed;
  bool refine_warning = false;
  /// Result of the rerun at dt/2, when requested.
  std::optional<SimStatus> control_status;
  std::optional<double> control_estimate;

  double estimate() const { return 0.5 * (t_lo + t_hi); }
};

struct SweepOptions {
  unsigned threads = 0;  ///< 0 = hardware concurrency
  bool confirm_half_dt = false;
};

struct LifespanSweep {
  std::vector<LifespanRecord> records;  ///< in eps_list order
  LineFit fit;                          ///< log T against log eps
  LineFit log_corrected_fit;            ///< log T - |k| log log(1/eps) against log eps
  double target = 0.0;                  ///< lifespan exponent
  bool monotone = true;                 ///< T non-increasing in eps within brackets
  std::vector<double> excluded_eps;
  std::vector<std::string> notes;
};

/// Simulates, refines and fits the lifespan over eps_list (subcritical p only,
/// at least 5 values spanning a decade).
LifespanSweep lifespan_sweep(const SimConfig& base, const std::vector<double>& eps_list,
                             const SweepOptions& options = {});

/// Runs `count` independent jobs on a bounded pool; job i writes slot i.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job);

struct TestFunctionPair {
  int ell = 0;
  double R = 1.0;
  double p = 2.0;
  double horizon = 0.0;
  CutoffProfile profile;
  std::vector<double> center;
  RealField phi;      ///< phi(|x - c|/R) on the grid
  RealField lap_phi;  ///< (Delta phi)(|x - c|/R), unscaled
  double eta_bound = 0.0;
  double phi_bound = 0.0;
  /// phi again on the quadrature grid (quadrature_factor times finer per
  /// axis) used for the space integrals; the transition layer of phi is too
  /// thin for the simulation grid alone.
  int quadrature_factor = 1;
  RealField phi_fine;

  double conjugate() const { return p / (p - 1.0); }
  double eta(double t) const { return profile.value(t / (R * R)); }
  double eta_dt(double t) const { return profile.d1(t / (R * R)) / (R * R); }
  double eta_dtt(double t) const { return profile.d2(t / (R * R)) / (R * R * R * R); }
};

/// ell = ceil(2 p') + 1. The bound fields hold the grid maxima of
/// eta^{-p'/p}(|eta'|^{p'} + |eta''|^{p'}) and phi^{-p'/p}|Delta phi|^{p'}.
TestFunctionPair build_test_functions(double p, double R, const Grid& grid, double horizon,
                                      const std::vector<double>& center = {});

struct BlowupFunctional {
  double I_R = 0.0;
  double data_term = 0.0;
  double rhs_bound = 0.0;
  /// C_R in rhs_bound = I_R^{1/p} R^{(n+2)/p' - 2} C_R.
  double holder_constant = 0.0;
  /// Both sides of the integrated weak identity I_R + data_term = int u L Phi_R.
  double weak_lhs = 0.0;
  double weak_rhs = 0.0;

  double identity_residual() const { return std::abs(weak_lhs - weak_rhs); }
};

/// Space-time functionals of a run against Phi_R; needs snapshots covering
/// [0, R^2] with spacing at most R^2/200.
BlowupFunctional blowup_functional(const SimResult& result, const TestFunctionPair& tf,
                                   const ModelParams& params);

/// C_R of the Hoelder step, by midpoint quadrature in (t/R^2, |x|/R).
double holder_constant(const TestFunctionPair& tf, int n, int cells = 1500);

/// eps * int (u0 + u1) phi_R dx from the initial state of a run.
double data_term(const SpectralState& initial, const TestFunctionPair& tf);

}  // namespace dwlab
