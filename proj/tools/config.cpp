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

#include "config.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace wvsim::cli {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& line) {
  bool in_string = false;
  for (size_t k = 0; k < line.size(); ++k) {
    if (line[k] == '"') in_string = !in_string;
    if (line[k] == '#' && !in_string) return line.substr(0, k);
  }
  return line;
}

class ValueParser {
 public:
  ValueParser(const std::string& text, const std::string& origin)
      : text_(text), origin_(origin) {}

  ConfigValue parse() {
    ConfigValue v = parse_value();
    skip_space();
    if (pos_ != text_.size()) {
      fail("trailing characters after value");
    }
    return v;
  }

 private:
  [[noreturn]] void fail(const std::string& message) {
    throw ConfigError(origin_ + ": " + message + " in '" + text_ + "'");
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      ++pos_;
    }
  }

  ConfigValue parse_value() {
    skip_space();
    if (pos_ >= text_.size()) fail("empty value");
    const char c = text_[pos_];
    if (c == '[') return parse_array();
    if (c == '"') return parse_string();
    return parse_scalar();
  }

  ConfigValue parse_array() {
    ++pos_;  // consume '['
    ConfigValue v;
    v.kind = ConfigValue::Kind::Array;
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ']') {
      ++pos_;
      return v;
    }
    while (true) {
      v.array.push_back(parse_value());
      skip_space();
      if (pos_ >= text_.size()) fail("unterminated array");
      if (text_[pos_] == ',') {
        ++pos_;
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == ']') {  // trailing comma
          ++pos_;
          return v;
        }
        continue;
      }
      if (text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      fail("expected ',' or ']' in array");
    }
  }

  ConfigValue parse_string() {
    ++pos_;  // consume '"'
    std::string out;
    while (pos_ < text_.size() && text_[pos_] != '"') {
      out.push_back(text_[pos_++]);
    }
    if (pos_ >= text_.size()) fail("unterminated string");
    ++pos_;  // closing quote
    ConfigValue v;
    v.kind = ConfigValue::Kind::String;
    v.str = std::move(out);
    return v;
  }

  ConfigValue parse_scalar() {
    size_t end = pos_;
    while (end < text_.size() && text_[end] != ',' && text_[end] != ']' &&
           !std::isspace(static_cast<unsigned char>(text_[end]))) {
      ++end;
    }
    const std::string token = text_.substr(pos_, end - pos_);
    pos_ = end;
    ConfigValue v;
    if (token == "true" || token == "false") {
      v.kind = ConfigValue::Kind::Boolean;
      v.boolean = (token == "true");
      return v;
    }
    char* parsed_end = nullptr;
    const double num = std::strtod(token.c_str(), &parsed_end);
    if (parsed_end == token.c_str() || *parsed_end != '\0' ||
        !std::isfinite(num)) {
      fail("cannot parse scalar '" + token + "'");
    }
    v.kind = ConfigValue::Kind::Number;
    v.num = num;
    return v;
  }

  const std::string& text_;
  const std::string& origin_;
  size_t pos_ = 0;
};

int bracket_balance(const std::string& s) {
  int depth = 0;
  bool in_string = false;
  for (char c : s) {
    if (c == '"') in_string = !in_string;
    if (in_string) continue;
    if (c == '[') ++depth;
    if (c == ']') --depth;
  }
  return depth;
}

bool valid_key(const std::string& key) {
  if (key.empty()) return false;
  for (char c : key) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-' &&
        c != '.') {
      return false;
    }
  }
  return true;
}

double expect_number(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::Number) {
    throw ConfigError("key '" + key + "' must be a number");
  }
  return v.num;
}

int expect_int(const ConfigValue& v, const std::string& key) {
  const double d = expect_number(v, key);
  const double rounded = std::round(d);
  if (std::abs(d - rounded) > 1e-9) {
    throw ConfigError("key '" + key + "' must be an integer");
  }
  return static_cast<int>(rounded);
}

std::string expect_string(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::String) {
    throw ConfigError("key '" + key + "' must be a string");
  }
  return v.str;
}

Complex expect_complex(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::Array || v.array.size() != 2 ||
      v.array[0].kind != ConfigValue::Kind::Number ||
      v.array[1].kind != ConfigValue::Kind::Number) {
    throw ConfigError("key '" + key + "': complex literals are [re, im] pairs");
  }
  return Complex(v.array[0].num, v.array[1].num);
}

Vector expect_complex_vector(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::Array || v.array.empty()) {
    throw ConfigError("key '" + key + "' must be a non-empty array of [re, im]");
  }
  Vector out(static_cast<Eigen::Index>(v.array.size()));
  for (size_t k = 0; k < v.array.size(); ++k) {
    out(static_cast<Eigen::Index>(k)) = expect_complex(v.array[k], key);
  }
  return out;
}

Matrix expect_complex_matrix(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::Array || v.array.empty()) {
    throw ConfigError("key '" + key + "' must be an array of matrix rows");
  }
  const size_t rows = v.array.size();
  Matrix out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rows));
  for (size_t r = 0; r < rows; ++r) {
    const ConfigValue& row = v.array[r];
    if (row.kind != ConfigValue::Kind::Array || row.array.size() != rows) {
      throw ConfigError("key '" + key + "' must be a square matrix of [re, im]");
    }
    for (size_t c = 0; c < rows; ++c) {
      out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          expect_complex(row.array[c], key);
    }
  }
  return out;
}

Eigen::Vector3d expect_vec3(const ConfigValue& v, const std::string& key) {
  if (v.kind != ConfigValue::Kind::Array || v.array.size() != 3) {
    throw ConfigError("key '" + key + "' must be a real 3-vector");
  }
  Eigen::Vector3d out;
  for (int k = 0; k < 3; ++k) out(k) = expect_number(v.array[k], key);
  return out;
}

std::vector<double> expect_number_list(const ConfigValue& v,
                                       const std::string& key) {
  if (v.kind != ConfigValue::Kind::Array) {
    throw ConfigError("key '" + key + "' must be an array of numbers");
  }
  std::vector<double> out;
  for (const ConfigValue& e : v.array) out.push_back(expect_number(e, key));
  return out;
}

const std::vector<std::string>& allowed_keys() {
  static const std::vector<std::string> keys = {
      "scenario", "seed", "preset",
      "sweep.parameter", "sweep.values",
      "grid.n_points", "grid.width", "grid.center", "grid.x_min", "grid.x_max",
      "grid.mass",
      "states.pre", "states.post", "states.u_before", "states.u_after",
      "observable.matrix",
      "tolerances.overlap_floor",
      "qubit.r_i", "qubit.r_f", "qubit.m", "qubit.v", "qubit.q",
      "cnot.outcome",
      "protective.e0", "protective.theta_max", "protective.total_time",
      "protective.g0", "protective.eigenstate_index",
      "decoherence.h0", "decoherence.h1", "decoherence.e_i", "decoherence.e_f",
      "decoherence.t_i", "decoherence.t_0", "decoherence.t_f",
      "decoherence.slices",
  };
  return keys;
}

Scenario parse_scenario(const std::string& name) {
  if (name == "weak-value") return Scenario::WeakValue;
  if (name == "abl") return Scenario::Abl;
  if (name == "probe-sweep") return Scenario::ProbeSweep;
  if (name == "qubit-probe") return Scenario::QubitProbe;
  if (name == "cnot-sweep") return Scenario::CnotSweep;
  if (name == "protective") return Scenario::Protective;
  if (name == "decoherence") return Scenario::Decoherence;
  throw ConfigError("unknown scenario '" + name + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace

const char* scenario_name(Scenario s) {
  switch (s) {
    case Scenario::WeakValue: return "weak-value";
    case Scenario::Abl: return "abl";
    case Scenario::ProbeSweep: return "probe-sweep";
    case Scenario::QubitProbe: return "qubit-probe";
    case Scenario::CnotSweep: return "cnot-sweep";
    case Scenario::Protective: return "protective";
    case Scenario::Decoherence: return "decoherence";
  }
  return "unknown";
}

uint64_t fnv1a(const std::string& bytes) {
  uint64_t hash = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 1099511628211ull;
  }
  return hash;
}

ConfigTable parse_config_text(const std::string& text, const std::string& origin) {
  ConfigTable table;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string payload = trim(strip_comment(line));
    if (payload.empty()) continue;
    const std::string where = origin + ":" + std::to_string(line_no);

    if (payload.front() == '[') {
      if (payload.back() != ']') {
        throw ConfigError(where + ": malformed section header");
      }
      section = trim(payload.substr(1, payload.size() - 2));
      if (!valid_key(section)) {
        throw ConfigError(where + ": invalid section name '" + section + "'");
      }
      continue;
    }

    const size_t eq = payload.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    std::string key = trim(payload.substr(0, eq));
    if (!valid_key(key)) {
      throw ConfigError(where + ": invalid key '" + key + "'");
    }
    std::string value_text = trim(payload.substr(eq + 1));

    // Arrays may span lines; accumulate until the brackets balance.
    while (bracket_balance(value_text) > 0) {
      std::string more;
      if (!std::getline(in, more)) {
        throw ConfigError(where + ": unterminated array for key '" + key + "'");
      }
      ++line_no;
      value_text += " " + trim(strip_comment(more));
    }

    const std::string full_key = section.empty() ? key : section + "." + key;
    if (table.count(full_key)) {
      throw ConfigError(where + ": duplicate key '" + full_key + "'");
    }
    table[full_key] = ValueParser(value_text, where).parse();
  }
  return table;
}

ConfigTable parse_config_file(const std::string& path) {
  return parse_config_text(read_file(path), path);
}

RunConfig load_run_config(const std::string& path, const std::string& preset_dir) {
  const std::string raw = read_file(path);
  ConfigTable table = parse_config_text(raw, path);

  // The preset is a base layer; explicit keys win.
  if (auto it = table.find("preset"); it != table.end()) {
    const std::string preset = expect_string(it->second, "preset");
    if (!valid_key(preset)) {
      throw ConfigError("invalid preset name '" + preset + "'");
    }
    const std::string preset_path = preset_dir + "/" + preset + ".toml";
    ConfigTable base = parse_config_file(preset_path);
    if (base.count("preset")) {
      throw ConfigError(preset_path + ": presets must not reference presets");
    }
    table.erase("preset");
    for (auto& [key, value] : table) base[key] = value;
    table = std::move(base);
  }

  for (const auto& [key, value] : table) {
    (void)value;
    bool known = false;
    for (const std::string& allowed : allowed_keys()) {
      if (key == allowed) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError("unknown key '" + key + "'");
  }

  RunConfig config;
  config.config_hash = fnv1a(raw);

  auto get = [&](const std::string& key) -> const ConfigValue* {
    auto it = table.find(key);
    return it == table.end() ? nullptr : &it->second;
  };

  const ConfigValue* scenario = get("scenario");
  if (!scenario) throw ConfigError("missing required key 'scenario'");
  config.scenario = parse_scenario(expect_string(*scenario, "scenario"));

  if (const ConfigValue* seed = get("seed")) {
    const double s = expect_number(*seed, "seed");
    if (s < 0) throw ConfigError("seed must be non-negative");
    config.seed = static_cast<uint64_t>(s);
  }

  const ConfigValue* sweep_name = get("sweep.parameter");
  const ConfigValue* sweep_values = get("sweep.values");
  if (!sweep_name || !sweep_values) {
    throw ConfigError("missing [sweep] parameter/values");
  }
  config.sweep_parameter = expect_string(*sweep_name, "sweep.parameter");
  config.sweep_values = expect_number_list(*sweep_values, "sweep.values");
  if (config.sweep_values.empty()) {
    throw ConfigError("sweep.values must be a non-empty list");
  }

  if (const ConfigValue* v = get("grid.n_points")) {
    config.grid.n_points = expect_int(*v, "grid.n_points");
  }
  if (const ConfigValue* v = get("grid.width")) config.grid.width = expect_number(*v, "grid.width");
  if (const ConfigValue* v = get("grid.center")) config.grid.center = expect_number(*v, "grid.center");
  if (const ConfigValue* v = get("grid.mass")) config.grid.mass = expect_number(*v, "grid.mass");
  const ConfigValue* xmin = get("grid.x_min");
  const ConfigValue* xmax = get("grid.x_max");
  if ((xmin == nullptr) != (xmax == nullptr)) {
    throw ConfigError("grid.x_min and grid.x_max must be given together");
  }
  if (xmin && xmax) {
    config.grid.x_min = expect_number(*xmin, "grid.x_min");
    config.grid.x_max = expect_number(*xmax, "grid.x_max");
    config.grid.window_given = true;
  }

  if (const ConfigValue* v = get("states.pre")) {
    config.states.pre = expect_complex_vector(*v, "states.pre");
  }
  if (const ConfigValue* v = get("states.post")) {
    config.states.post = expect_complex_vector(*v, "states.post");
  }
  if (const ConfigValue* v = get("states.u_before")) {
    config.states.u_before = expect_complex_matrix(*v, "states.u_before");
  }
  if (const ConfigValue* v = get("states.u_after")) {
    config.states.u_after = expect_complex_matrix(*v, "states.u_after");
  }
  if (const ConfigValue* v = get("observable.matrix")) {
    config.observable = expect_complex_matrix(*v, "observable.matrix");
  }
  if (const ConfigValue* v = get("tolerances.overlap_floor")) {
    config.overlap_floor = expect_number(*v, "tolerances.overlap_floor");
    if (config.overlap_floor < 0) {
      throw ConfigError("tolerances.overlap_floor must be >= 0");
    }
  }

  if (const ConfigValue* v = get("qubit.r_i")) config.qubit.r_i = expect_vec3(*v, "qubit.r_i");
  if (const ConfigValue* v = get("qubit.r_f")) config.qubit.r_f = expect_vec3(*v, "qubit.r_f");
  if (const ConfigValue* v = get("qubit.m")) config.qubit.m = expect_vec3(*v, "qubit.m");
  if (const ConfigValue* v = get("qubit.v")) config.qubit.v = expect_vec3(*v, "qubit.v");
  if (const ConfigValue* v = get("qubit.q")) config.qubit.q = expect_vec3(*v, "qubit.q");

  if (const ConfigValue* v = get("cnot.outcome")) {
    config.cnot.outcome = expect_int(*v, "cnot.outcome");
    if (config.cnot.outcome != 0 && config.cnot.outcome != 1) {
      throw ConfigError("cnot.outcome must be 0 or 1");
    }
  }

  if (const ConfigValue* v = get("protective.e0")) config.protective.e0 = expect_number(*v, "protective.e0");
  if (const ConfigValue* v = get("protective.theta_max")) config.protective.theta_max = expect_number(*v, "protective.theta_max");
  if (const ConfigValue* v = get("protective.total_time")) config.protective.total_time = expect_number(*v, "protective.total_time");
  if (const ConfigValue* v = get("protective.g0")) config.protective.g0 = expect_number(*v, "protective.g0");
  if (const ConfigValue* v = get("protective.eigenstate_index")) {
    config.protective.eigenstate_index = expect_int(*v, "protective.eigenstate_index");
    if (config.protective.eigenstate_index != 0 &&
        config.protective.eigenstate_index != 1) {
      throw ConfigError("protective.eigenstate_index must be 0 or 1");
    }
  }

  if (const ConfigValue* v = get("decoherence.h0")) config.decoherence.h0 = expect_complex_matrix(*v, "decoherence.h0");
  if (const ConfigValue* v = get("decoherence.h1")) config.decoherence.h1 = expect_complex_matrix(*v, "decoherence.h1");
  if (const ConfigValue* v = get("decoherence.e_i")) config.decoherence.e_i = expect_complex_vector(*v, "decoherence.e_i");
  if (const ConfigValue* v = get("decoherence.e_f")) config.decoherence.e_f = expect_complex_vector(*v, "decoherence.e_f");
  if (const ConfigValue* v = get("decoherence.t_i")) config.decoherence.t_i = expect_number(*v, "decoherence.t_i");
  if (const ConfigValue* v = get("decoherence.t_0")) config.decoherence.t_0 = expect_number(*v, "decoherence.t_0");
  if (const ConfigValue* v = get("decoherence.t_f")) config.decoherence.t_f = expect_number(*v, "decoherence.t_f");
  if (const ConfigValue* v = get("decoherence.slices")) config.decoherence.slices = expect_int(*v, "decoherence.slices");

  return config;
}

}  // namespace wvsim::cli
