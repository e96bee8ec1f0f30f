#include "dwlab/config.hpp"

#include "dwlab/csv.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

namespace dwlab {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw ConfigError("config: key '" + key + "' expects a number, got '" + v + "'");
}

int to_int(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (x != std::floor(x) || std::abs(x) > 1e9) {
    throw ConfigError("config: key '" + key + "' expects an integer, got '" + v + "'");
  }
  return static_cast<int>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError("config: key '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::istringstream in(v);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(to_double(key, trim(item)));
  if (out.empty()) throw ConfigError("config: key '" + key + "' expects a comma-separated list");
  return out;
}

std::string list_text(const std::vector<double>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    s += format_double(xs[i]);
  }
  return s;
}

// Grid fields are kept aside until all keys are read, since Grid validates on
// construction.
struct Pending {
  RunConfig rc;
  int points = 0;
  double box_length = 0.0;
};

struct Key {
  std::string name;
  std::function<void(Pending&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& schema() {
  static const std::vector<Key> keys = [] {
    std::vector<Key> k;
    auto num = [&k](std::string name, double SimConfig::*field) {
      k.push_back({name, [name, field](Pending& p, const std::string& v) { p.rc.sim.*field = to_double(name, v); },
                   [field](const RunConfig& c) { return format_double(c.sim.*field); }});
    };
    auto param = [&k](std::string name, double ModelParams::*field) {
      k.push_back({name,
                   [name, field](Pending& p, const std::string& v) { p.rc.sim.params.*field = to_double(name, v); },
                   [field](const RunConfig& c) { return format_double(c.sim.params.*field); }});
    };
    k.push_back({"n", [](Pending& p, const std::string& v) { p.rc.sim.params.n = to_int("n", v); },
                 [](const RunConfig& c) { return std::to_string(c.sim.params.n); }});
    k.push_back({"points", [](Pending& p, const std::string& v) { p.points = to_int("points", v); },
                 [](const RunConfig& c) { return std::to_string(c.sim.grid.points()); }});
    k.push_back({"box_length", [](Pending& p, const std::string& v) { p.box_length = to_double("box_length", v); },
                 [](const RunConfig& c) { return format_double(c.sim.grid.box_length()); }});
    param("m", &ModelParams::m);
    param("gamma", &ModelParams::gamma);
    param("p", &ModelParams::p);
    param("s", &ModelParams::s);
    param("eps", &ModelParams::eps);
    k.push_back({"eps_list", [](Pending& p, const std::string& v) { p.rc.eps_list = to_list("eps_list", v); },
                 [](const RunConfig& c) { return list_text(c.eps_list); }});
    num("dt", &SimConfig::dt);
    num("t_max", &SimConfig::t_max);
    num("blowup_factor", &SimConfig::blowup_factor);
    k.push_back({"output_stride",
                 [](Pending& p, const std::string& v) { p.rc.sim.output_stride = to_int("output_stride", v); },
                 [](const RunConfig& c) { return std::to_string(c.sim.output_stride); }});
    k.push_back({"adaptive", [](Pending& p, const std::string& v) { p.rc.sim.adaptive = to_bool("adaptive", v); },
                 [](const RunConfig& c) { return std::string(c.sim.adaptive ? "true" : "false"); }});
    num("nonlinearity_scale", &SimConfig::nonlinearity_scale);
    num("snapshot_interval", &SimConfig::snapshot_interval);
    num("snapshot_until", &SimConfig::snapshot_until);
    num("lifespan_resolution", &SimConfig::lifespan_resolution);
    k.push_back({"data.kind",
                 [](Pending& p, const std::string& v) {
                   try {
                     p.rc.sim.data.kind = parse_data_kind(v);
                   } catch (const std::exception& e) {
                     throw ConfigError(std::string("config: data.kind: ") + e.what());
                   }
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.sim.data.kind)); }});
    k.push_back({"data.center",
                 [](Pending& p, const std::string& v) { p.rc.sim.data.center = to_list("data.center", v); },
                 [](const RunConfig& c) {
                   return c.sim.data.center.empty()
                              ? list_text(std::vector<double>(static_cast<std::size_t>(c.sim.params.n), 0.0))
                              : list_text(c.sim.data.center);
                 }});
    k.push_back({"data.width", [](Pending& p, const std::string& v) { p.rc.sim.data.width = to_double("data.width", v); },
                 [](const RunConfig& c) { return format_double(c.sim.data.width); }});
    k.push_back({"data.lowfreq_power",
                 [](Pending& p, const std::string& v) {
                   p.rc.sim.data.lowfreq_power = to_double("data.lowfreq_power", v);
                 },
                 [](const RunConfig& c) { return format_double(c.sim.data.lowfreq_power); }});
    k.push_back({"data.c0", [](Pending& p, const std::string& v) { p.rc.sim.data.amplitude_c0 = to_double("data.c0", v); },
                 [](const RunConfig& c) { return format_double(c.sim.data.amplitude_c0); }});
    k.push_back({"fit.norm",
                 [](Pending& p, const std::string& v) {
                   try {
                     p.rc.fit_norm = parse_norm_selector(v);
                   } catch (const std::exception& e) {
                     throw ConfigError(std::string("config: fit.norm: ") + e.what());
                   }
                 },
                 [](const RunConfig& c) { return std::string(to_string(c.fit_norm)); }});
    k.push_back({"fit.t_a", [](Pending& p, const std::string& v) { p.rc.fit_t_a = to_double("fit.t_a", v); },
                 [](const RunConfig& c) {
                   return format_double(c.fit_t_a.value_or(default_decay_window(c.sim.t_max).first));
                 }});
    k.push_back({"fit.t_b", [](Pending& p, const std::string& v) { p.rc.fit_t_b = to_double("fit.t_b", v); },
                 [](const RunConfig& c) {
                   return format_double(c.fit_t_b.value_or(default_decay_window(c.sim.t_max).second));
                 }});
    k.push_back({"sweep.confirm_half_dt",
                 [](Pending& p, const std::string& v) { p.rc.confirm_half_dt = to_bool("sweep.confirm_half_dt", v); },
                 [](const RunConfig& c) { return std::string(c.confirm_half_dt ? "true" : "false"); }});
    k.push_back({"functional.radii",
                 [](Pending& p, const std::string& v) { p.rc.radii = to_list("functional.radii", v); },
                 [](const RunConfig& c) { return list_text(c.radii); }});
    k.push_back({"campaign.count",
                 [](Pending& p, const std::string& v) { p.rc.campaign_count = to_int("campaign.count", v); },
                 [](const RunConfig& c) { return std::to_string(c.campaign_count); }});
    k.push_back({"campaign.cap",
                 [](Pending& p, const std::string& v) { p.rc.campaign_cap = to_double("campaign.cap", v); },
                 [](const RunConfig& c) { return format_double(c.campaign_cap); }});
    k.push_back({"kernel.cutoff",
                 [](Pending& p, const std::string& v) { p.rc.kernel_cutoff = to_double("kernel.cutoff", v); },
                 [](const RunConfig& c) { return format_double(c.kernel_cutoff); }});
    return k;
  }();
  return keys;
}

const Key* find_key(std::string_view name) {
  for (const auto& k : schema()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

}  // namespace

std::vector<std::string> config_keys() {
  std::vector<std::string> out;
  for (const auto& k : schema()) out.push_back(k.name);
  return out;
}

std::map<std::string, std::string> parse_key_values(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!find_key(key)) throw ConfigError("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    if (value.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty value for '" + key + "'");
    if (!kv.emplace(key, value).second) {
      throw ConfigError("config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
    }
  }
  return kv;
}

RunConfig build_run_config(const std::map<std::string, std::string>& kv, AmplitudeKey amplitude) {
  std::vector<std::string> required{"n", "points", "box_length", "m", "gamma", "p", "dt", "t_max", "data.kind"};
  required.push_back(amplitude == AmplitudeKey::eps ? "eps" : "eps_list");
  for (const auto& r : required) {
    if (!kv.count(r)) throw ConfigError("config: missing required key '" + r + "'");
  }
  Pending pending;
  for (const auto& [key, value] : kv) {
    const Key* k = find_key(key);
    if (!k) throw ConfigError("config: unknown key '" + key + "'");
    k->set(pending, value);
  }
  RunConfig rc = std::move(pending.rc);
  try {
    rc.sim.grid = make_grid(rc.sim.params.n, pending.points, pending.box_length);
    if (amplitude == AmplitudeKey::eps_list) {
      if (rc.eps_list.empty()) throw std::invalid_argument("eps_list is empty");
      rc.sim.params.eps = rc.eps_list.front();
    }
    rc.sim.validate();
    if (rc.campaign_count < 1) throw std::invalid_argument("campaign.count must be >= 1");
    if (!(rc.kernel_cutoff > 0.0)) throw std::invalid_argument("kernel.cutoff must be positive");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return rc;
}

RunConfig load_run_config(const std::filesystem::path& path, AmplitudeKey amplitude) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return build_run_config(parse_key_values(text.str()), amplitude);
}

std::string resolved_config(const RunConfig& config) {
  std::string out;
  for (const auto& k : schema()) {
    if (k.name == "eps_list" && config.eps_list.empty()) continue;
    if (k.name == "functional.radii" && config.radii.empty()) continue;
    out += k.name + " = " + k.get(config) + "\n";
  }
  return out;
}

}  // namespace dwlab
