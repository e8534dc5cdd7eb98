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

#ifndef WVSIM_TOOLS_CONFIG_HPP
#define WVSIM_TOOLS_CONFIG_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "wvsim/core.hpp"

namespace wvsim::cli {

// Configuration problems exit with code 2; domain guards with code 3.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& message)
      : std::runtime_error(message) {}
};

// Minimal TOML subset: [section] headers, key = value with strings, numbers,
// booleans and (nested, possibly multi-line) arrays. Keys are flattened to
// "section.key". Duplicate keys are rejected.
struct ConfigValue {
  enum class Kind { String, Number, Boolean, Array };
  Kind kind = Kind::Number;
  std::string str;
  double num = 0.0;
  bool boolean = false;
  std::vector<ConfigValue> array;
};

using ConfigTable = std::map<std::string, ConfigValue>;

ConfigTable parse_config_text(const std::string& text, const std::string& origin);
ConfigTable parse_config_file(const std::string& path);

enum class Scenario {
  WeakValue,
  Abl,
  ProbeSweep,
  QubitProbe,
  CnotSweep,
  Protective,
  Decoherence,
};

const char* scenario_name(Scenario s);

struct GridConfig {
  int n_points = 1024;
  double width = 1.0;
  double center = 0.0;
  double x_min = -20.0;
  double x_max = 20.0;
  double mass = 1.0;
  bool window_given = false;
};

struct StatesConfig {
  std::optional<Vector> pre;
  std::optional<Vector> post;
  std::optional<Matrix> u_before;
  std::optional<Matrix> u_after;
};

struct QubitConfig {
  Eigen::Vector3d r_i{0, 0, 1};
  Eigen::Vector3d r_f{1, 0, 0};
  Eigen::Vector3d m{0, 1, 0};
  Eigen::Vector3d v{0, 0, 1};
  Eigen::Vector3d q{1, 0, 0};
};

struct CnotConfig {
  int outcome = 0;
};

struct ProtectiveConfig {
  double e0 = 1.0;
  double theta_max = 1.5707963267948966;
  double total_time = 40.0;
  double g0 = 0.1;
  int eigenstate_index = 1;
};

struct DecoherenceConfig {
  std::optional<Matrix> h0;
  std::optional<Matrix> h1;
  std::optional<Vector> e_i;
  std::optional<Vector> e_f;
  double t_i = 0.0;
  double t_0 = 0.7;
  double t_f = 1.5;
  int slices = 512;
};

struct RunConfig {
  Scenario scenario = Scenario::WeakValue;
  uint64_t seed = 0;
  std::string sweep_parameter;
  std::vector<double> sweep_values;
  GridConfig grid;
  StatesConfig states;
  std::optional<Matrix> observable;
  QubitConfig qubit;
  CnotConfig cnot;
  ProtectiveConfig protective;
  DecoherenceConfig decoherence;
  double overlap_floor = kDefaultOverlapFloor;
  uint64_t config_hash = 0;  // FNV-1a of the raw config file bytes
};

// Parses, resolves an optional `preset = "name"` against preset_dir (the
// user file overrides preset keys) and validates the schema. Unknown keys
// are rejected.
RunConfig load_run_config(const std::string& path, const std::string& preset_dir);

uint64_t fnv1a(const std::string& bytes);

}  // namespace wvsim::cli

#endif  // WVSIM_TOOLS_CONFIG_HPP
