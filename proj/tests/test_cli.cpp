// Copyright 2026 The wvsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <limits>

#include "config.hpp"
#include "scenarios.hpp"
#include "table.hpp"

using namespace wvsim;
using namespace wvsim::cli;

namespace {

std::string write_temp(const std::string& name, const std::string& text) {
  const std::string path = std::string("/tmp/wvsim_test_") + name;
  std::ofstream out(path, std::ios::binary);
  out << text;
  return path;
}

}  // namespace

TEST_CASE("config parser handles the value grammar") {
  ConfigTable t = parse_config_text(
      "scenario = \"abl\"   # comment\n"
      "seed = 7\n"
      "flag = true\n"
      "[sweep]\n"
      "parameter = \"box\"\n"
      "values = [1, 2,\n"
      "          3]\n"
      "[states]\n"
      "pre = [[1, 0], [0, -1.5e-2]]\n",
      "inline");
  CHECK(t.at("scenario").str == "abl");
  CHECK(t.at("seed").num == 7);
  CHECK(t.at("flag").boolean);
  CHECK(t.at("sweep.values").array.size() == 3);
  CHECK(t.at("states.pre").array[1].array[1].num == doctest::Approx(-0.015));
}

TEST_CASE("config parser rejects malformed input") {
  CHECK_THROWS_AS(parse_config_text("just words\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("a = [1, 2\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("a = \"unterminated\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("a = 1\na = 2\n", "x"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("a = nonsense\n", "x"), ConfigError);
}

TEST_CASE("run config validation") {
  const std::string base =
      "scenario = \"abl\"\n"
      "[sweep]\nparameter = \"box\"\nvalues = [1]\n"
      "[states]\npre = [[1,0],[1,0]]\npost = [[1,0],[-1,0]]\n";

  // Unknown keys are rejected.
  const std::string unknown = write_temp("unknown.toml", base + "typo = 1\n");
  CHECK_THROWS_AS(load_run_config(unknown, "presets"), ConfigError);

  // Missing sweep.
  const std::string no_sweep =
      write_temp("nosweep.toml", "scenario = \"abl\"\n");
  CHECK_THROWS_AS(load_run_config(no_sweep, "presets"), ConfigError);

  // Empty sweep list.
  const std::string empty = write_temp(
      "empty.toml",
      "scenario = \"abl\"\n[sweep]\nparameter = \"box\"\nvalues = []\n");
  CHECK_THROWS_AS(load_run_config(empty, "presets"), ConfigError);

  const std::string ok = write_temp("ok.toml", base);
  RunConfig config = load_run_config(ok, "presets");
  CHECK(config.scenario == Scenario::Abl);
  CHECK(config.sweep_values.size() == 1);
}

TEST_CASE("three-box preset drives the abl scenario") {
  const std::string path = write_temp(
      "preset_run.toml", "preset = \"three-box\"\nscenario = \"abl\"\n");
  RunConfig config = load_run_config(path, WVSIM_PRESET_DIR);
  ResultTable table = run_scenario(config, 1);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0][1] == doctest::Approx(1.0).epsilon(1e-12));  // box 1
  CHECK(table.rows[1][1] == doctest::Approx(0.2).epsilon(1e-12));  // box 2
  CHECK(table.rows[2][1] == doctest::Approx(1.0).epsilon(1e-12));  // box 3
}

TEST_CASE("weak-value scenario on the preset states") {
  const std::string path = write_temp("wv_run.toml",
                                      "preset = \"three-box\"\n"
                                      "scenario = \"weak-value\"\n"
                                      "[sweep]\n"
                                      "parameter = \"projector\"\n"
                                      "values = [1, 2, 3]\n");
  RunConfig config = load_run_config(path, WVSIM_PRESET_DIR);
  ResultTable table = run_scenario(config, 2);
  REQUIRE(table.rows.size() == 3);
  CHECK(table.rows[0][1] == doctest::Approx(1.0));
  CHECK(table.rows[1][1] == doctest::Approx(-1.0));
  CHECK(table.rows[2][1] == doctest::Approx(1.0));
  // Completeness across the swept projectors.
  CHECK(table.rows[0][1] + table.rows[1][1] + table.rows[2][1] ==
        doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("amplification preset converges to dq/g = 100") {
  const std::string path =
      write_temp("amp_run.toml", "preset = \"spin-amplification\"\n");
  RunConfig config = load_run_config(path, WVSIM_PRESET_DIR);
  ResultTable table = run_scenario(config, 0);
  REQUIRE(table.rows.size() == 4);
  // Column 5 is dq/g; the smallest g sits in the last row.
  CHECK(std::abs(table.rows.back()[5] - 100.0) < 1.0);
}

TEST_CASE("sweep parameter name must match the scenario") {
  const std::string path = write_temp("badsweep.toml",
                                      "preset = \"three-box\"\n"
                                      "[sweep]\n"
                                      "parameter = \"g\"\n"
                                      "values = [1]\n");
  RunConfig config = load_run_config(path, WVSIM_PRESET_DIR);
  CHECK_THROWS_AS(run_scenario(config, 1), ConfigError);
}

TEST_CASE("csv output is stable and rejects non-finite rows") {
  ResultTable table;
  table.metadata = {{"k", "v"}};
  table.columns = {"a", "b"};
  table.rows = {{1.0, 0.1}, {2.0, 1.0 / 3.0}};
  const std::string csv = table.to_csv();
  CHECK(csv == "# k=v\na,b\n1,0.10000000000000001\n2,0.33333333333333331\n");

  ResultTable bad = table;
  bad.rows[0][0] = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(bad.to_csv(), SimError);
}

TEST_CASE("run_scenario is deterministic and worker-count independent") {
  const std::string path =
      write_temp("det_run.toml", "preset = \"spin-amplification\"\n");
  RunConfig config = load_run_config(path, WVSIM_PRESET_DIR);
  const std::string csv1 = run_scenario(config, 1).to_csv();
  const std::string csv4 = run_scenario(config, 4).to_csv();
  CHECK(csv1 == csv4);
}

TEST_CASE("cnot scenario rows carry both probability routes") {
  const std::string path = write_temp("cnot_run.toml",
                                      "scenario = \"cnot-sweep\"\n"
                                      "[sweep]\n"
                                      "parameter = \"epsilon\"\n"
                                      "values = [0.1, 0.2]\n"
                                      "[states]\n"
                                      "pre = [[0.6, 0], [0.8, 0]]\n"
                                      "post = [[1, 0], [0, 0]]\n"
                                      "[cnot]\n"
                                      "outcome = 0\n");
  RunConfig config = load_run_config(path, WVSIM_PRESET_DIR);
  ResultTable table = run_scenario(config, 1);
  REQUIRE(table.rows.size() == 2);
  for (const auto& row : table.rows) {
    CHECK(row[3] == doctest::Approx(row[4]).epsilon(1e-12));
  }
}

TEST_CASE("domain guards surface as named errors, not NaN output") {
  // Orthogonal pre/post with the weak-value scenario trips the overlap floor.
  const std::string path = write_temp("guard_run.toml",
                                      "scenario = \"weak-value\"\n"
                                      "[sweep]\n"
                                      "parameter = \"projector\"\n"
                                      "values = [1]\n"
                                      "[states]\n"
                                      "pre = [[1, 0], [0, 0]]\n"
                                      "post = [[0, 0], [1, 0]]\n");
  RunConfig config = load_run_config(path, WVSIM_PRESET_DIR);
  try {
    run_scenario(config, 1);
    CHECK(false);
  } catch (const SimError& e) {
    CHECK(e.guard() == Guard::NearOrthogonalSelection);
    CHECK(std::string(e.what()).find("NearOrthogonalSelection") !=
          std::string::npos);
  }
}
