// Command-line front end: one subcommand per experiment, CSV outputs in --out.

#include "dwlab/config.hpp"
#include "dwlab/csv.hpp"
#include "dwlab/inequalities.hpp"
#include "dwlab/lab.hpp"
#include "dwlab/propagator.hpp"
#include "dwlab/timestepper.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace dwlab;

namespace {

constexpr int kExitConfig = 1;
constexpr int kExitNumerical = 2;

/// Runs that finished but cannot be trusted (step underflow, non-finite output).
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonFlags {
  std::string config;
  std::string out = "dwlab_out";
  std::uint64_t seed = 1;
  unsigned threads = 0;
  bool verbose = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "key = value run configuration");
  cmd->add_option("--out", f.out, "output directory")->capture_default_str();
  cmd->add_option("--seed", f.seed, "random seed")->capture_default_str();
  cmd->add_option("--threads", f.threads, "worker threads (0 = auto)")->capture_default_str();
  cmd->add_flag("--verbose", f.verbose, "progress on stderr");
}

fs::path prepare_out(const CommonFlags& f) {
  fs::path dir(f.out);
  fs::create_directories(dir);
  return dir;
}

RunConfig require_config(const CommonFlags& f, AmplitudeKey amplitude) {
  if (f.config.empty()) throw ConfigError("--config is required for this subcommand");
  return load_run_config(f.config, amplitude);
}

std::string norms_csv(const NormSeries& s) {
  CsvWriter w({"t", "l2", "hs_dot", "lm", "w_l2", "w_hs", "w_lm", "supnorm"});
  for (std::size_t i = 0; i < s.size(); ++i) {
    w.row({format_double(s.times[i]), format_double(s.l2[i]), format_double(s.hs_dot[i]), format_double(s.lm[i]),
           format_double(s.w_l2[i]), format_double(s.w_hs[i]), format_double(s.w_lm[i]),
           format_double(s.supnorm[i])});
  }
  return w.text();
}

NormSeries read_norms(const fs::path& path) {
  const CsvTable t = read_csv(path);
  NormSeries s;
  s.times = t.numeric_column("t");
  s.l2 = t.numeric_column("l2");
  s.hs_dot = t.numeric_column("hs_dot");
  s.lm = t.numeric_column("lm");
  s.w_l2 = t.numeric_column("w_l2");
  s.w_hs = t.numeric_column("w_hs");
  s.w_lm = t.numeric_column("w_lm");
  s.supnorm = t.numeric_column("supnorm");
  return s;
}

const std::vector<std::string> kFitHeader{"experiment", "slope", "intercept", "r2", "t_a", "t_b", "target",
                                          "target_source"};

void check_run(const SimResult& r) {
  if (r.status == SimStatus::step_underflow) {
    throw NumericalFailure("simulation stopped: adaptive step fell below 1e-12 t_max");
  }
  if (!r.final_state.uhat.all_finite() && r.status != SimStatus::blew_up) {
    throw NumericalFailure("simulation produced non-finite values without a blow-up flag");
  }
}

void report_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";
}

// Decay target of a norm for the configured data. Low-frequency weighted data
// is integrable with |xi|^a vanishing at the origin, so its rate follows the
// L^1 structure with gamma = a rather than the (m, gamma) of the model.
std::pair<double, std::string> decay_target(const RunConfig& rc) {
  const auto& prm = rc.sim.params;
  if (rc.sim.data.kind == DataKind::lowfreq_weighted) {
    const double a = rc.sim.data.lowfreq_power;
    const double base = -0.25 * prm.n - 0.5 * a;
    switch (rc.fit_norm) {
      case NormSelector::l2: return {base, "data_envelope"};
      case NormSelector::hs_dot: return {base - 0.5 * prm.s, "data_envelope"};
      case NormSelector::lm: return {-0.5 * prm.n * (1.0 - 1.0 / prm.m) - 0.5 * a, "data_envelope"};
      case NormSelector::supnorm: return {-0.5 * prm.n - 0.5 * a, "data_envelope"};
    }
  }
  const ExponentTable t = exponent_table(prm);
  switch (rc.fit_norm) {
    case NormSelector::l2: return {t.decay_l2, "exponent_table:decay_l2"};
    case NormSelector::hs_dot: return {t.decay_hs, "exponent_table:decay_hs"};
    case NormSelector::lm: return {t.decay_lm, "exponent_table:decay_lm"};
    case NormSelector::supnorm: break;
  }
  return {std::nan(""), "none"};
}

int cmd_simulate(const CommonFlags& f) {
  const RunConfig rc = require_config(f, AmplitudeKey::eps);
  const fs::path dir = prepare_out(f);
  write_atomic(dir / "resolved_config.txt", resolved_config(rc));
  const SimResult r = simulate(rc.sim);
  report_warnings(r.warnings);
  check_run(r);
  write_atomic(dir / "norms.csv", norms_csv(r.norms));
  std::cout << "status=" << to_string(r.status) << "\n"
            << "accepted_steps=" << r.accepted_steps << "\n"
            << "rejected_steps=" << r.rejected_steps << "\n";
  if (r.status == SimStatus::blew_up) {
    const LifespanRefinement ref = refine_lifespan(rc.sim, r);
    if (ref.warning) std::cerr << "warning: " << ref.message << "\n";
    CsvWriter w({"eps", "p", "t_lo", "t_hi", "status"});
    w.row({format_double(rc.sim.params.eps), format_double(rc.sim.params.p), format_double(ref.t_lo),
           format_double(ref.t_hi), std::string(to_string(r.status))});
    write_atomic(dir / "lifespan.csv", w.text());
    std::cout << "t_lo=" << format_double(ref.t_lo) << "\nt_hi=" << format_double(ref.t_hi) << "\n";
  }
  return 0;
}

int cmd_decay_fit(const CommonFlags& f, const std::string& norms_path, const std::string& which,
                  std::optional<double> t_a, std::optional<double> t_b) {
  const fs::path dir = prepare_out(f);
  NormSeries series;
  std::optional<RunConfig> rc;
  if (!norms_path.empty()) {
    series = read_norms(norms_path);
    if (!f.config.empty()) rc = load_run_config(f.config, AmplitudeKey::eps);
  } else {
    rc = require_config(f, AmplitudeKey::eps);
    write_atomic(dir / "resolved_config.txt", resolved_config(*rc));
    const SimResult r = simulate(rc->sim);
    report_warnings(r.warnings);
    check_run(r);
    if (r.status == SimStatus::blew_up) throw NumericalFailure("decay fit: the run blew up");
    series = r.norms;
    write_atomic(dir / "norms.csv", norms_csv(series));
  }
  NormSelector sel = rc ? rc->fit_norm : NormSelector::l2;
  if (!which.empty()) sel = parse_norm_selector(which);
  if (series.times.empty()) throw ConfigError("decay fit: empty norm series");
  const auto window = default_decay_window(series.times.back());
  const double a = t_a ? *t_a : (rc && rc->fit_t_a ? *rc->fit_t_a : window.first);
  const double b = t_b ? *t_b : (rc && rc->fit_t_b ? *rc->fit_t_b : window.second);
  const DecayFit fit = fit_decay(series, sel, a, b);
  double target = std::nan("");
  std::string source = "none";
  if (rc) {
    rc->fit_norm = sel;
    std::tie(target, source) = decay_target(*rc);
  }
  CsvWriter w(kFitHeader);
  w.row({"decay_" + std::string(to_string(sel)), format_double(fit.slope), format_double(fit.intercept),
         format_double(fit.r2), format_double(fit.t_a), format_double(fit.t_b), format_double(target), source});
  write_atomic(dir / "fit.csv", w.text());
  std::cout << "slope=" << format_double(fit.slope) << "\nr2=" << format_double(fit.r2)
            << "\ntarget=" << format_double(target) << "\n";
  return 0;
}

int cmd_lifespan_sweep(const CommonFlags& f) {
  const RunConfig rc = require_config(f, AmplitudeKey::eps_list);
  const fs::path dir = prepare_out(f);
  write_atomic(dir / "resolved_config.txt", resolved_config(rc));
  SweepOptions opts;
  opts.threads = f.threads;
  opts.confirm_half_dt = rc.confirm_half_dt;
  const LifespanSweep sweep = lifespan_sweep(rc.sim, rc.eps_list, opts);
  CsvWriter recs({"eps", "p", "t_lo", "t_hi", "status"});
  for (const auto& r : sweep.records) {
    recs.row({format_double(r.eps), format_double(r.p), format_double(r.t_lo), format_double(r.t_hi),
              std::string(to_string(r.status))});
  }
  write_atomic(dir / "lifespan.csv", recs.text());
  CsvWriter fits(kFitHeader);
  const std::string nan = format_double(std::nan(""));
  fits.row({"lifespan", format_double(sweep.fit.slope), format_double(sweep.fit.intercept),
            format_double(sweep.fit.r2), nan, nan, format_double(sweep.target), "exponent_table:lifespan_exp"});
  fits.row({"lifespan_log_corrected", format_double(sweep.log_corrected_fit.slope),
            format_double(sweep.log_corrected_fit.intercept), format_double(sweep.log_corrected_fit.r2), nan, nan,
            format_double(sweep.target), "exponent_table:lifespan_exp"});
  write_atomic(dir / "fit.csv", fits.text());
  for (const auto& n : sweep.notes) std::cerr << "note: " << n << "\n";
  std::cout << "slope=" << format_double(sweep.fit.slope) << "\ntarget=" << format_double(sweep.target)
            << "\nmonotone=" << (sweep.monotone ? "true" : "false") << "\n";
  return 0;
}

int cmd_blowup_functional(const CommonFlags& f) {
  RunConfig rc = require_config(f, AmplitudeKey::eps);
  if (rc.radii.empty()) throw ConfigError("config: missing required key 'functional.radii'");
  double r_min = rc.radii.front(), r_max = rc.radii.front();
  for (double R : rc.radii) {
    r_min = std::min(r_min, R);
    r_max = std::max(r_max, R);
  }
  rc.sim.snapshot_interval = r_min * r_min / 200.0;
  rc.sim.snapshot_until = r_max * r_max;
  rc.sim.t_max = std::max(rc.sim.t_max, r_max * r_max);
  const fs::path dir = prepare_out(f);
  write_atomic(dir / "resolved_config.txt", resolved_config(rc));
  const SimResult run = simulate(rc.sim);
  report_warnings(run.warnings);
  check_run(run);
  CsvWriter w({"R", "I_R", "data_term", "rhs_bound", "holder_constant", "weak_lhs", "weak_rhs", "holder_ok"});
  std::vector<double> logR, logD;
  for (double R : rc.radii) {
    const TestFunctionPair tf = build_test_functions(rc.sim.params.p, R, rc.sim.grid, R * R, rc.sim.data.center);
    const BlowupFunctional bf = blowup_functional(run, tf, rc.sim.params);
    const bool ok = bf.data_term <= bf.rhs_bound - bf.I_R + 1e-8 * (1.0 + std::abs(bf.rhs_bound));
    w.row({format_double(R), format_double(bf.I_R), format_double(bf.data_term), format_double(bf.rhs_bound),
           format_double(bf.holder_constant), format_double(bf.weak_lhs), format_double(bf.weak_rhs),
           ok ? "true" : "false"});
    if (bf.data_term > 0.0) {
      logR.push_back(std::log(R));
      logD.push_back(std::log(bf.data_term) + std::log(std::log(R)));
    }
  }
  write_atomic(dir / "functional.csv", w.text());
  if (logR.size() >= 2) {
    const auto& prm = rc.sim.params;
    const LineFit fit = fit_line(logR, logD);
    CsvWriter fits(kFitHeader);
    fits.row({"data_term_log_corrected", format_double(fit.slope), format_double(fit.intercept),
              format_double(fit.r2), format_double(r_min), format_double(r_max),
              format_double(prm.n - prm.n / prm.m - prm.gamma), "n-n/m-gamma"});
    write_atomic(dir / "fit.csv", fits.text());
    std::cout << "data_term_slope=" << format_double(fit.slope) << "\n";
  }
  std::cout << "status=" << to_string(run.status) << "\n";
  return 0;
}

int cmd_verify_inequalities(const CommonFlags& f, int count_flag) {
  int count = 200;
  double cap = kInfinity;
  double cutoff = 0.25;
  if (!f.config.empty()) {
    // Only the campaign keys matter here; the simulation keys are optional.
    const auto kv = parse_key_values([&] {
      std::ifstream in(f.config);
      if (!in) throw ConfigError("config: cannot read " + f.config);
      std::ostringstream s;
      s << in.rdbuf();
      return s.str();
    }());
    for (const auto& [k, v] : kv) {
      if (k == "campaign.count") count = std::stoi(v);
      else if (k == "campaign.cap") cap = std::stod(v);
      else if (k == "kernel.cutoff") cutoff = std::stod(v);
    }
  }
  if (count_flag > 0) count = count_flag;
  if (count < 1) throw ConfigError("campaign.count must be >= 1");
  if (!(cutoff > 0.0)) throw ConfigError("kernel.cutoff must be positive");
  CampaignOptions opts = CampaignOptions::defaults();
  opts.cap = cap;
  opts.threads = f.threads;
  opts.kernel_cutoff = cutoff;
  const fs::path dir = prepare_out(f);
  write_atomic(dir / "resolved_config.txt", "campaign.count = " + std::to_string(count) + "\ncampaign.cap = " +
                                                format_double(cap) + "\nkernel.cutoff = " + format_double(cutoff) +
                                                "\n# seed = " + std::to_string(f.seed) + "\n");
  const auto reports = run_campaign(f.seed, count, opts);
  CsvWriter w({"name", "seed", "samples", "max_ratio", "refined_ratio"});
  bool clean = true;
  for (const auto& r : reports) {
    w.row({r.name, std::to_string(r.seed), std::to_string(r.samples), format_double(r.max_ratio),
           format_double(r.ratio_at_refined_grid)});
    if (r.nonfinite_count) clean = false;
    if (f.verbose) {
      std::cerr << r.name << ": violations=" << r.violation_count << " nonfinite=" << r.nonfinite_count << "\n";
    }
  }
  write_atomic(dir / "inequalities.csv", w.text());
  std::cout << w.text();
  if (!clean) throw NumericalFailure("non-finite inequality ratios");
  return 0;
}

int cmd_kernel_table(const CommonFlags& f, const std::vector<double>& ts, const std::vector<double>& xis) {
  CsvWriter w({"t", "xi", "k", "dk"});
  for (double t : ts) {
    for (double xi : xis) {
      if (!(t >= 0.0) || !(xi >= 0.0)) throw ConfigError("kernel-table: t and xi must be nonnegative");
      const auto kv = khat(t, xi * xi);
      w.row({format_double(t), format_double(xi), format_double(kv.k), format_double(kv.dk)});
    }
  }
  std::cout << w.text();
  if (!f.config.empty() || f.out != "dwlab_out") {
    write_atomic(prepare_out(f) / "kernel.csv", w.text());
  }
  return 0;
}

int cmd_exponent_table(const ModelParams& prm) {
  try {
    prm.validate();
  } catch (const std::exception& e) {
    throw ConfigError(e.what());
  }
  const ExponentTable t = exponent_table(prm);
  std::cout << "p_crit=" << format_double(t.p_crit) << "\n"
            << "p1=" << format_double(t.p1) << "\n"
            << "gamma_bar=" << format_double(t.gamma_bar) << "\n"
            << "beta_m=" << format_double(t.beta_m) << "\n"
            << "decay_l2=" << format_double(t.decay_l2) << "\n"
            << "decay_hs=" << format_double(t.decay_hs) << "\n"
            << "decay_lm=" << format_double(t.decay_lm) << "\n"
            << "lifespan_exp=" << (t.lifespan_exp ? format_double(*t.lifespan_exp) : "none") << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pseudospectral lab for the damped wave equation u_tt - Lap u + u_t = |u|^p"};
  app.require_subcommand(1);

  CommonFlags flags;

  auto* sim = app.add_subcommand("simulate", "integrate one run, write norms.csv");
  add_common(sim, flags);

  auto* decay = app.add_subcommand("decay-fit", "fit a power law to a norm series");
  add_common(decay, flags);
  std::string norms_path, which;
  std::optional<double> t_a, t_b;
  decay->add_option("--norms", norms_path, "fit an existing norms.csv instead of simulating");
  decay->add_option("--norm", which, "l2 | hs_dot | lm | supnorm");
  decay->add_option("--t-a", t_a, "window start");
  decay->add_option("--t-b", t_b, "window end");

  auto* sweep = app.add_subcommand("lifespan-sweep", "lifespan against eps, with power-law fit");
  add_common(sweep, flags);

  auto* func = app.add_subcommand("blowup-functional", "test-function functionals of a run");
  add_common(func, flags);

  auto* ineq = app.add_subcommand("verify-inequalities", "randomized inequality campaign");
  add_common(ineq, flags);
  int count = 0;
  ineq->add_option("--count", count, "samples per inequality (default 200)");

  auto* kern = app.add_subcommand("kernel-table", "kernel values on a (t, |xi|) lattice");
  add_common(kern, flags);
  std::vector<double> ts{1.0}, xis{0.0};
  kern->add_option("--t", ts, "times")->delimiter(',');
  kern->add_option("--xi", xis, "frequencies |xi|")->delimiter(',');

  auto* expo = app.add_subcommand("exponent-table", "critical and decay exponents");
  add_common(expo, flags);
  ModelParams prm;
  expo->add_option("--n", prm.n, "dimension")->capture_default_str();
  expo->add_option("--m", prm.m, "Lebesgue exponent of the data")->capture_default_str();
  expo->add_option("--gamma", prm.gamma, "negative regularity order")->capture_default_str();
  expo->add_option("--p", prm.p, "nonlinearity exponent")->capture_default_str();
  expo->add_option("--s", prm.s, "energy regularity")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*sim) return cmd_simulate(flags);
    if (*decay) return cmd_decay_fit(flags, norms_path, which, t_a, t_b);
    if (*sweep) return cmd_lifespan_sweep(flags);
    if (*func) return cmd_blowup_functional(flags);
    if (*ineq) return cmd_verify_inequalities(flags, count);
    if (*kern) return cmd_kernel_table(flags, ts, xis);
    if (*expo) return cmd_exponent_table(prm);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitConfig;
}
