#pragma once

#include "dwlab/lab.hpp"
#include "dwlab/timestepper.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dwlab {

/// Malformed or incomplete configuration (maps to exit code 1 in the CLI).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// SimConfig plus the experiment-level knobs of the CLI subcommands.
struct RunConfig {
  SimConfig sim;
  std::vector<double> eps_list;

  NormSelector fit_norm = NormSelector::l2;
  std::optional<double> fit_t_a;
  std::optional<double> fit_t_b;

  bool confirm_half_dt = false;

  std::vector<double> radii;

  int campaign_count = 200;
  double campaign_cap = kInfinity;
  double kernel_cutoff = 0.25;
};

enum class AmplitudeKey { eps, eps_list };

/// Flat `key = value` lines; `#` starts a comment. Duplicate keys and keys not
/// in the schema are rejected.
std::map<std::string, std::string> parse_key_values(const std::string& text);

/// Builds a RunConfig; `amplitude` picks which of eps / eps_list is required.
RunConfig build_run_config(const std::map<std::string, std::string>& kv, AmplitudeKey amplitude);

RunConfig load_run_config(const std::filesystem::path& path, AmplitudeKey amplitude);

/// Every key with its resolved value, re-loadable by load_run_config.
std::string resolved_config(const RunConfig& config);

/// All keys understood by the parser.
std::vector<std::string> config_keys();

}  // namespace dwlab
