#include "doctest.h"

#include "dwlab/config.hpp"
#include "dwlab/csv.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

using namespace dwlab;

namespace {

const char* kBase =
    "n = 1\n"
    "points = 256\n"
    "box_length = 64\n"
    "m = 2\n"
    "gamma = 0\n"
    "p = 3   # cubic\n"
    "dt = 0.01\n"
    "t_max = 5\n"
    "data.kind = gaussian\n";

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "dwlab_test_config";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("key-value parsing") {
  const auto kv = parse_key_values(std::string(kBase) + "eps = 0.1\n\n# comment line\n");
  CHECK(kv.at("p") == "3");
  CHECK(kv.at("data.kind") == "gaussian");
  CHECK(kv.size() == 10);

  CHECK_THROWS_AS(parse_key_values("colour = red\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("p = 2\np = 3\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("p =\n"), ConfigError);
  CHECK_THROWS_AS(parse_key_values("just text\n"), ConfigError);
}

TEST_CASE("run config") {
  auto kv = parse_key_values(std::string(kBase) + "eps = 0.1\n");
  const RunConfig c = build_run_config(kv, AmplitudeKey::eps);
  CHECK(c.sim.params.p == 3.0);
  CHECK(c.sim.params.eps == 0.1);
  CHECK(c.sim.grid.points() == 256);
  CHECK(c.sim.t_max == 5.0);
  CHECK(c.sim.data.kind == DataKind::gaussian);

  SUBCASE("missing key is named") {
    kv.erase("t_max");
    try {
      build_run_config(kv, AmplitudeKey::eps);
      FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
      CHECK(std::string(e.what()).find("'t_max'") != std::string::npos);
    }
  }
  SUBCASE("amplitude key follows the subcommand") {
    CHECK_THROWS_AS(build_run_config(kv, AmplitudeKey::eps_list), ConfigError);
    auto sweep = parse_key_values(std::string(kBase) + "eps_list = 0.1, 0.2,0.4\n");
    CHECK(build_run_config(sweep, AmplitudeKey::eps_list).eps_list == std::vector<double>{0.1, 0.2, 0.4});
  }
  SUBCASE("bad values") {
    kv["p"] = "three";
    CHECK_THROWS_AS(build_run_config(kv, AmplitudeKey::eps), ConfigError);
    kv["p"] = "0.5";
    CHECK_THROWS_AS(build_run_config(kv, AmplitudeKey::eps), ConfigError);
    kv["p"] = "3";
    kv["data.kind"] = "square";
    CHECK_THROWS_AS(build_run_config(kv, AmplitudeKey::eps), ConfigError);
  }
}

TEST_CASE("resolved config round trip") {
  auto kv = parse_key_values(std::string(kBase) +
                             "eps = 0.1\n"
                             "fit.norm = lm\n"
                             "fit.t_a = 10\n"
                             "functional.radii = 2,4\n"
                             "data.width = 0.3\n"
                             "campaign.cap = 5\n");
  const RunConfig c = build_run_config(kv, AmplitudeKey::eps);
  const std::string text = resolved_config(c);
  const RunConfig d = build_run_config(parse_key_values(text), AmplitudeKey::eps);
  CHECK(resolved_config(d) == text);
  CHECK(d.fit_norm == NormSelector::lm);
  CHECK(d.fit_t_a == 10.0);
  CHECK(d.fit_t_b == 4.0);  // resolved from the default window
  CHECK(d.radii == std::vector<double>{2.0, 4.0});
  CHECK(d.sim.data.width == 0.3);
  CHECK(d.campaign_cap == 5.0);
  for (const auto& key : config_keys()) {
    if (key == "eps_list") continue;
    CHECK_MESSAGE(text.find(key + " = ") != std::string::npos, key);
  }

  const auto path = scratch("round_trip.txt");
  write_atomic(path, text);
  CHECK(resolved_config(load_run_config(path, AmplitudeKey::eps)) == text);
  CHECK_THROWS_AS(load_run_config(scratch("absent.txt"), AmplitudeKey::eps), ConfigError);
}

TEST_CASE("csv") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
  CHECK(format_double(2.0) == "2");

  CsvWriter w({"t", "value"});
  w.row({"0", format_double(0.5)}).row({"1", format_double(-1e-300)});
  CHECK(w.text() == "t,value\n0,0.5\n1,-1e-300\n");
  CHECK_THROWS_AS(w.row({"1"}), std::invalid_argument);

  const auto path = scratch("table.csv");
  write_atomic(path, w.text());
  CHECK(!std::filesystem::exists(path.string() + ".tmp"));
  const CsvTable table = read_csv(path);
  CHECK(table.header == std::vector<std::string>{"t", "value"});
  CHECK(table.numeric_column("value") == std::vector<double>{0.5, -1e-300});
  CHECK_THROWS(table.column("missing"));

  write_atomic(path, "a\n7\n");
  CHECK(read_csv(path).numeric_column("a") == std::vector<double>{7.0});
}
