#include "dwlab/lab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <thread>

namespace dwlab {

double critical_exponent(int n, double m, double gamma) {
  return 1.0 + 2.0 * m / (n + m * gamma);
}

double gamma_bar(int n, double m) {
  // (sqrt(n^2 + 8mn) - n)/(2m) without the cancellation
  return 4.0 * n / (std::sqrt(static_cast<double>(n) * n + 8.0 * m * n) + n);
}

ExponentTable exponent_table(const ModelParams& params) {
  params.validate();
  const int n = params.n;
  const double m = params.m, g = params.gamma, p = params.p;
  ExponentTable t{};
  t.p_crit = critical_exponent(n, m, g);
  t.p1 = 1.0 + m * g / n;
  t.gamma_bar = gamma_bar(n, m);
  t.beta_m = (n - 1) * (1.0 / m - 0.5);
  t.decay_l2 = -params.lm_l2_gap() - 0.5 * g + 0.0;  // no "-0" in tables
  t.decay_hs = t.decay_l2 - 0.5 * params.s;
  t.decay_lm = -0.5 * g + 0.0;
  if (p < t.p_crit) {
    t.lifespan_exp = -2.0 * (p - 1.0) / (2.0 - (n / m + g) * (p - 1.0));
  }
  return t;
}

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw std::invalid_argument("fit_line: need at least two paired samples");
  }
  const double count = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / count;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    sse += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  fit.samples = x.size();
  return fit;
}

NormSelector parse_norm_selector(std::string_view name) {
  if (name == "l2") return NormSelector::l2;
  if (name == "hs_dot") return NormSelector::hs_dot;
  if (name == "lm") return NormSelector::lm;
  if (name == "supnorm") return NormSelector::supnorm;
  throw std::invalid_argument("unknown norm selector '" + std::string(name) + "'");
}

std::string_view to_string(NormSelector which) {
  switch (which) {
    case NormSelector::l2: return "l2";
    case NormSelector::hs_dot: return "hs_dot";
    case NormSelector::lm: return "lm";
    case NormSelector::supnorm: return "supnorm";
  }
  return "?";
}

DecayFit fit_decay(const NormSeries& series, NormSelector which, double t_a, double t_b) {
  const std::vector<double>* values = nullptr;
  switch (which) {
    case NormSelector::l2: values = &series.l2; break;
    case NormSelector::hs_dot: values = &series.hs_dot; break;
    case NormSelector::lm: values = &series.lm; break;
    case NormSelector::supnorm: values = &series.supnorm; break;
  }
  std::vector<double> x, y;
  for (std::size_t i = 0; i < series.size(); ++i) {
    const double t = series.times[i];
    if (t < t_a || t > t_b) continue;
    const double v = (*values)[i];
    if (!(v > 0.0)) {
      throw std::domain_error("fit_decay: nonpositive norm value at t = " + std::to_string(t));
    }
    x.push_back(std::log1p(t));
    y.push_back(std::log(v));
  }
  if (x.size() < 10) {
    throw std::invalid_argument("fit_decay: fewer than 10 samples in the window");
  }
  DecayFit fit;
  static_cast<LineFit&>(fit) = fit_line(x, y);
  fit.t_a = t_a;
  fit.t_b = t_b;
  return fit;
}

std::pair<double, double> default_decay_window(double t_max) { return {0.1 * t_max, 0.8 * t_max}; }

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            job(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

namespace {

LifespanRecord run_lifespan(const SimConfig& config) {
  LifespanRecord rec;
  rec.eps = config.params.eps;
  rec.p = config.params.p;
  const SimResult result = simulate(config);
  rec.status = result.status;
  if (result.status == SimStatus::blew_up) {
    const LifespanRefinement ref = refine_lifespan(config, result);
    rec.t_lo = ref.t_lo;
    rec.t_hi = ref.t_hi;
    rec.refine_warning = ref.warning;
  } else {
    rec.t_lo = result.final_state.t;
    rec.t_hi = result.final_state.t;
  }
  return rec;
}

}  // namespace

LifespanSweep lifespan_sweep(const SimConfig& base, const std::vector<double>& eps_list,
                             const SweepOptions& options) {
  base.validate();
  const ExponentTable table = exponent_table(base.params);
  if (!table.lifespan_exp) {
    throw std::invalid_argument("lifespan_sweep: p must be below p_crit = " + std::to_string(table.p_crit));
  }
  if (eps_list.size() < 5) throw std::invalid_argument("lifespan_sweep: need at least 5 eps values");
  const auto [lo_it, hi_it] = std::minmax_element(eps_list.begin(), eps_list.end());
  if (!(*lo_it > 0.0) || *hi_it < 10.0 * *lo_it * (1.0 - 1e-12)) {
    throw std::invalid_argument("lifespan_sweep: eps values must be positive and span a decade");
  }

  LifespanSweep sweep;
  sweep.target = *table.lifespan_exp;
  sweep.records.resize(eps_list.size());
  parallel_for(eps_list.size(), options.threads, [&](std::size_t i) {
    SimConfig cfg = base;
    cfg.params.eps = eps_list[i];
    LifespanRecord rec = run_lifespan(cfg);
    if (options.confirm_half_dt) {
      cfg.dt *= 0.5;
      const LifespanRecord control = run_lifespan(cfg);
      rec.control_status = control.status;
      rec.control_estimate = control.estimate();
    }
    sweep.records[i] = rec;
  });

  std::vector<const LifespanRecord*> blown;
  for (const auto& r : sweep.records) {
    if (r.status == SimStatus::blew_up) {
      blown.push_back(&r);
    } else {
      sweep.excluded_eps.push_back(r.eps);
      sweep.notes.push_back("eps = " + std::to_string(r.eps) + " did not blow up before t_max");
    }
  }
  std::sort(blown.begin(), blown.end(), [](auto* a, auto* b) { return a->eps < b->eps; });
  for (std::size_t i = 1; i < blown.size(); ++i) {
    if (blown[i]->t_lo > blown[i - 1]->t_hi) sweep.monotone = false;
  }
  if (!blown.empty()) {
    const LifespanRecord* largest = blown.back();
    if (largest->t_hi - largest->t_lo > 0.05 * largest->estimate()) {
      sweep.excluded_eps.push_back(largest->eps);
      sweep.notes.push_back("largest eps excluded: bracket wider than 5% of T");
      blown.pop_back();
    }
  }
  if (blown.size() >= 2) {
    std::vector<double> x, y, yc;
    bool below_one = true;
    for (auto* r : blown) {
      x.push_back(std::log(r->eps));
      y.push_back(std::log(r->estimate()));
      below_one = below_one && r->eps < 1.0;
      if (below_one) yc.push_back(y.back() - std::abs(sweep.target) * std::log(std::log(1.0 / r->eps)));
    }
    sweep.fit = fit_line(x, y);
    if (below_one) {
      sweep.log_corrected_fit = fit_line(x, yc);
    } else {
      sweep.log_corrected_fit.slope = std::nan("");
      sweep.notes.push_back("log-corrected fit needs every eps < 1");
    }
  } else {
    sweep.fit.slope = std::nan("");
    sweep.log_corrected_fit.slope = std::nan("");
    sweep.notes.push_back("fewer than two blown-up runs; no fit");
  }
  return sweep;
}

}  // namespace dwlab
