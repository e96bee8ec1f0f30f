#include "dwlab/timestepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dwlab {

void SimConfig::validate() const {
  params.validate();
  data.validate();
  if (params.n != grid.dim()) {
    throw std::invalid_argument("SimConfig: model dimension n must equal the grid dimension");
  }
  if (!(dt > 0.0)) throw std::invalid_argument("SimConfig: dt must be positive");
  if (!(t_max > 0.0)) throw std::invalid_argument("SimConfig: t_max must be positive");
  if (!(blowup_factor > 1.0)) throw std::invalid_argument("SimConfig: blowup_factor must exceed 1");
  if (output_stride < 1) throw std::invalid_argument("SimConfig: output_stride must be >= 1");
  if (!(snapshot_interval >= 0.0)) throw std::invalid_argument("SimConfig: snapshot_interval must be >= 0");
  if (!(lifespan_resolution >= 0.0)) throw std::invalid_argument("SimConfig: lifespan_resolution must be >= 0");
}

std::string_view to_string(SimStatus status) {
  switch (status) {
    case SimStatus::completed: return "completed";
    case SimStatus::blew_up: return "blew_up";
    case SimStatus::step_underflow: return "step_underflow";
  }
  return "?";
}

Stepper::Stepper(const Grid& grid, const ModelParams& params, double nonlinearity_scale)
    : grid_(grid), params_(params), scale_(nonlinearity_scale) {}

const LinearPropagator& Stepper::propagator(double dt) {
  auto it = cache_.find(dt);
  if (it != cache_.end()) return it->second;
  if (cache_.size() > 64) cache_.clear();
  return cache_.emplace(dt, LinearPropagator(grid_, dt)).first->second;
}

PowerResult Stepper::evaluate(const SpectralField& uhat) const {
  if (linear()) {
    const RealField u = from_spectral(uhat);
    PowerResult out{SpectralField(grid_), u.sup_norm(), true};
    out.finite = std::isfinite(out.sup_norm);
    return out;
  }
  PowerResult out = power_dealiased_spectral(uhat, params_.p);
  if (scale_ != 1.0) out.power.coeffs *= scale_;
  return out;
}

Stepper::Outcome Stepper::advance(const SpectralState& state, const PowerResult& start_power,
                                  double dt) {
  const LinearPropagator& prop = propagator(dt);
  auto [u_lin, v_lin] = prop.apply(state.uhat, state.uthat);
  if (linear()) {
    PowerResult end = evaluate(u_lin);
    return {SpectralState{state.t + dt, std::move(u_lin), std::move(v_lin)}, std::move(end)};
  }
  const Eigen::ArrayXcd& n0 = start_power.power.coeffs;
  SpectralField u_pred(grid_, u_lin.coeffs + dt * prop.k * n0);
  const PowerResult pred_power = evaluate(u_pred);

  SpectralField u_new(grid_, u_lin.coeffs + (0.5 * dt) * prop.k * n0);
  SpectralField v_new(grid_, v_lin.coeffs + (0.5 * dt) * (prop.dk * n0 + pred_power.power.coeffs));
  PowerResult end = evaluate(u_new);
  if (!pred_power.finite) end.finite = false;
  return {SpectralState{state.t + dt, std::move(u_new), std::move(v_new)}, std::move(end)};
}

SpectralState step(const SpectralState& state, double dt, const ModelParams& params,
                   double nonlinearity_scale) {
  if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be positive");
  Stepper stepper(state.uhat.grid, params, nonlinearity_scale);
  const PowerResult start = stepper.evaluate(state.uhat);
  return stepper.advance(state, start, dt).state;
}

SpectralState initial_state(const SimConfig& config, std::vector<std::string>* warnings) {
  InitialData data = generate(config.data, config.params, config.grid);
  if (warnings) {
    warnings->insert(warnings->end(), data.warnings.begin(), data.warnings.end());
  }
  const double eps = config.params.eps;
  return SpectralState{0.0, eps * to_spectral(data.u0), eps * to_spectral(data.u1)};
}

void record_norms(NormSeries& series, const SpectralState& state, const ModelParams& params,
                  const PowerResult* power) {
  const RealField u = from_spectral(state.uhat);
  series.times.push_back(state.t);
  series.l2.push_back(spectral_l2_norm(state.uhat));
  series.hs_dot.push_back(sobolev_l2_spectral(state.uhat, params.s));
  series.lm.push_back(lp_norm(u, params.m));
  series.supnorm.push_back(u.sup_norm());
  PowerResult local;
  if (!power) {
    local = power_dealiased_spectral(state.uhat, params.p);
    power = &local;
  }
  series.y_nonlinear.push_back(y_weighted(from_spectral(power->power), state.t, params));
}

namespace {

void finalize_series(SimResult& result, const ModelParams& params) {
  if (result.norms.size() == 0) return;
  WeightedNorms w = weighted_tracker(result.norms, params);
  result.norms.w_l2 = std::move(w.w_l2);
  result.norms.w_hs = std::move(w.w_hs);
  result.norms.w_lm = std::move(w.w_lm);
}

}  // namespace

SimResult simulate(const SimConfig& config) {
  config.validate();
  SimResult result;
  SpectralState state = initial_state(config, &result.warnings);
  result.initial_state = state;

  const double radius = config.data.support_radius();
  if (std::isfinite(radius) && config.grid.box_length() < 2.0 * (config.t_max + radius)) {
    result.warnings.push_back("box shorter than 2*(t_max + support radius): periodic images interact");
  }

  Stepper stepper(config.grid, config.params, config.nonlinearity_scale);
  PowerResult power = stepper.evaluate(state.uhat);
  if (!power.finite) throw std::domain_error("simulate: initial data is not finite");
  result.initial_sup = power.sup_norm;
  result.blowup_threshold =
      result.initial_sup > 0.0 ? config.blowup_factor * result.initial_sup : kInfinity;

  const bool linear_power = stepper.linear() || config.nonlinearity_scale != 1.0;
  auto record = [&](const SpectralState& s, const PowerResult& pw) {
    record_norms(result.norms, s, config.params, linear_power ? nullptr : &pw);
  };
  auto take_snapshot = [&](const SpectralState& s) {
    result.snapshots.push_back(Snapshot{s.t, from_spectral(s.uhat).values});
  };

  record(state, power);
  double next_snapshot = 0.0;
  if (config.snapshot_interval > 0.0) {
    take_snapshot(state);
    next_snapshot = config.snapshot_interval;
  }

  const double dt_floor = 1e-12 * config.t_max;
  double dt = config.dt;
  int quiet = 0;
  long since_record = 0;
  bool last_recorded = true;

  while (state.t < config.t_max) {
    const double h = std::min(dt, config.t_max - state.t);
    Stepper::Outcome next = stepper.advance(state, power, h);
    const bool finite = next.end_power.finite;
    const bool fast_growth = finite && result.initial_sup > 0.0 &&
                             next.end_power.sup_norm > 1.25 * power.sup_norm;

    if (config.adaptive && (!finite || fast_growth)) {
      ++result.rejected_steps;
      dt *= 0.5;
      quiet = 0;
      if (dt < dt_floor) {
        result.status = SimStatus::step_underflow;
        break;
      }
      continue;
    }

    const bool crossed = !finite || next.end_power.sup_norm > result.blowup_threshold;
    if (crossed) {
      result.status = SimStatus::blew_up;
      result.lifespan = std::make_pair(state.t, state.t + h);
      result.pre_blowup_state = state;
      if (!last_recorded) record(state, power);
      result.final_state = state;
      finalize_series(result, config.params);
      return result;
    }

    ++result.accepted_steps;
    state = std::move(next.state);
    power = std::move(next.end_power);
    last_recorded = false;
    if (++since_record >= config.output_stride) {
      record(state, power);
      since_record = 0;
      last_recorded = true;
    }
    if (config.snapshot_interval > 0.0 && state.t <= config.snapshot_until + 1e-12 * config.t_max &&
        state.t >= next_snapshot - 1e-12 * config.t_max) {
      take_snapshot(state);
      while (next_snapshot <= state.t + 1e-12 * config.t_max) next_snapshot += config.snapshot_interval;
    }
    if (config.adaptive && ++quiet >= 50 && dt < config.dt) {
      dt = std::min(config.dt, 2.0 * dt);
      quiet = 0;
    }
  }

  if (!last_recorded) record(state, power);
  result.final_state = state;
  finalize_series(result, config.params);
  return result;
}

LifespanRefinement refine_lifespan(const SimConfig& config, const SimResult& coarse) {
  if (coarse.status != SimStatus::blew_up || !coarse.lifespan || !coarse.pre_blowup_state) {
    throw std::invalid_argument("refine_lifespan: needs a blown-up run with a stored bracket");
  }
  LifespanRefinement out;
  out.t_lo = coarse.lifespan->first;
  out.t_hi = coarse.lifespan->second;
  const double target =
      config.lifespan_resolution > 0.0 ? config.lifespan_resolution : 1e-6 * config.t_max;

  Stepper stepper(config.grid, config.params, config.nonlinearity_scale);
  SpectralState base = *coarse.pre_blowup_state;
  PowerResult base_power = stepper.evaluate(base.uhat);
  const double threshold = coarse.blowup_threshold;
  auto is_over = [&](const PowerResult& pw) { return !pw.finite || pw.sup_norm > threshold; };

  while (out.t_hi - out.t_lo > 2.0 * target) {
    const double width = out.t_hi - out.t_lo;
    const double h = 0.5 * width;
    SpectralState s = base;
    PowerResult pw = base_power;
    bool found = false;
    // Up to four widths past the old upper end before giving up.
    const int max_steps = 2 + 8;
    for (int i = 1; i <= max_steps; ++i) {
      Stepper::Outcome next = stepper.advance(s, pw, h);
      if (is_over(next.end_power)) {
        const double lo = s.t, hi = s.t + h;
        if (hi > out.t_hi * (1.0 + 1e-14)) {
          out.warning = true;
          out.message = "finer steps crossed the threshold after the coarse bracket; bracket widened";
        }
        out.t_lo = lo;
        out.t_hi = hi;
        base = std::move(s);
        base_power = std::move(pw);
        found = true;
        break;
      }
      s = std::move(next.state);
      pw = std::move(next.end_power);
    }
    ++out.rounds;
    if (!found) {
      out.warning = true;
      out.message = "finer steps did not reproduce the blow-up near the coarse bracket";
      out.t_hi = out.t_lo + 5.0 * width;
      out.widths.push_back(out.t_hi - out.t_lo);
      break;
    }
    out.widths.push_back(out.t_hi - out.t_lo);
  }
  return out;
}

}  // namespace dwlab
