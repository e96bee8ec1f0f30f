#pragma once

#include "dwlab/initial_data.hpp"
#include "dwlab/norms.hpp"
#include "dwlab/propagator.hpp"
#include "dwlab/spectral.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace dwlab {

struct SpectralState {
  double t = 0.0;
  SpectralField uhat;
  SpectralField uthat;
};

struct SimConfig {
  ModelParams params;
  Grid grid{1, 64, 1.0};
  DataSpec data;
  double dt = 0.01;
  double t_max = 1.0;
  double blowup_factor = 1e6;
  int output_stride = 1;
  bool adaptive = true;
  /// Multiplies |u|^p; 0 turns the run into exact linear propagation.
  double nonlinearity_scale = 1.0;
  /// Time spacing of stored physical snapshots of u; 0 stores none.
  double snapshot_interval = 0.0;
  /// Snapshots are stored for t <= snapshot_until.
  double snapshot_until = kInfinity;
  /// Target lifespan bracket width for refine_lifespan; 0 means 1e-6 * t_max.
  double lifespan_resolution = 0.0;

  void validate() const;
};

enum class SimStatus { completed, blew_up, step_underflow };
std::string_view to_string(SimStatus status);

struct Snapshot {
  double t;
  Eigen::ArrayXd u;
};

struct SimResult {
  SimStatus status = SimStatus::completed;
  NormSeries norms;
  std::optional<std::pair<double, double>> lifespan;
  SpectralState initial_state;
  SpectralState final_state;
  /// Last accepted state before the threshold crossing (blew_up only).
  std::optional<SpectralState> pre_blowup_state;
  double initial_sup = 0.0;
  double blowup_threshold = kInfinity;
  long accepted_steps = 0;
  long rejected_steps = 0;
  std::vector<Snapshot> snapshots;
  std::vector<std::string> warnings;
};

/// One step of the exponential integrator with cached propagators.
///
/// Predictor: (u*, v*) = P(dt)(u, v) + dt (K(dt), dK(dt)) N(u).
/// Corrector: trapezoidal rule on the Duhamel integrands K(dt - s) N and
/// dK(dt - s) N; since K(0) = 0 and dK(0) = 1,
///   u+ = P(dt)u + dt/2 K(dt) N(u),
///   v+ = P(dt)v + dt/2 (dK(dt) N(u) + N(u*)).
class Stepper {
 public:
  Stepper(const Grid& grid, const ModelParams& params, double nonlinearity_scale = 1.0);

  struct Outcome {
    SpectralState state;
    PowerResult end_power;  // nonlinearity and sup norm at the new state
  };

  /// N(u) and the sup norm of u at a state.
  PowerResult evaluate(const SpectralField& uhat) const;

  Outcome advance(const SpectralState& state, const PowerResult& start_power, double dt);

  const LinearPropagator& propagator(double dt);

  bool linear() const { return scale_ == 0.0; }

 private:
  Grid grid_;
  ModelParams params_;
  double scale_;
  std::map<double, LinearPropagator> cache_;
};

SpectralState step(const SpectralState& state, double dt, const ModelParams& params,
                   double nonlinearity_scale = 1.0);

/// eps * (u0, u1) in spectral form at t = 0.
SpectralState initial_state(const SimConfig& config, std::vector<std::string>* warnings = nullptr);

SimResult simulate(const SimConfig& config);

struct LifespanRefinement {
  double t_lo = 0.0;
  double t_hi = 0.0;
  int rounds = 0;
  std::vector<double> widths;  // bracket width after each round
  bool warning = false;
  std::string message;

  double estimate() const { return 0.5 * (t_lo + t_hi); }
};

/// Bisects the coarse blow-up bracket by re-stepping from the stored
/// pre-blow-up state with halved steps until the width is at most twice the
/// configured resolution.
LifespanRefinement refine_lifespan(const SimConfig& config, const SimResult& coarse);

/// Records norms of a state (finite-grid versions of L2, Hdot^s, L^m, sup).
void record_norms(NormSeries& series, const SpectralState& state, const ModelParams& params,
                  const PowerResult* power);

}  // namespace dwlab
