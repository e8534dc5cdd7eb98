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

#include <cstdlib>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "config.hpp"
#include "scenarios.hpp"
#include "table.hpp"
#include "wvsim/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitVerifyFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitDomain = 3;

int default_workers() {
  if (const char* env = std::getenv("WVSIM_WORKERS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // pick hardware concurrency
}

int run_command(const std::string& config_path, const std::string& out_path,
                long long seed_override, int workers,
                const std::string& preset_dir) {
  wvsim::cli::RunConfig config =
      wvsim::cli::load_run_config(config_path, preset_dir);
  if (seed_override >= 0) config.seed = static_cast<uint64_t>(seed_override);

  wvsim::cli::ResultTable table = wvsim::cli::run_scenario(config, workers);
  const std::string csv = table.to_csv();

  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    throw wvsim::cli::ConfigError("cannot open output file '" + out_path + "'");
  }
  out << csv;
  if (!out.good()) {
    throw wvsim::cli::ConfigError("failed writing output file '" + out_path + "'");
  }
  std::cerr << "wrote " << table.rows.size() << " rows to " << out_path << "\n";
  return kExitOk;
}

int verify_command(const std::string& suite, uint64_t seed) {
  std::vector<wvsim::CheckResult> results;
  try {
    results = wvsim::run_verify_suite(suite, seed);
  } catch (const wvsim::SimError& e) {
    if (e.guard() == wvsim::Guard::InvalidArgument) {
      std::cerr << "error: " << e.what() << "\n";
      return kExitConfig;
    }
    throw;
  }

  bool all_pass = true;
  std::string current_suite;
  double suite_millis = 0;
  int suite_pass = 0, suite_total = 0;
  auto flush_suite = [&]() {
    if (current_suite.empty()) return;
    std::cout << "suite\t" << current_suite << "\t" << suite_pass << "/"
              << suite_total << "\t" << suite_millis << "ms\n";
  };
  for (const wvsim::CheckResult& r : results) {
    if (r.suite != current_suite) {
      flush_suite();
      current_suite = r.suite;
      suite_millis = 0;
      suite_pass = 0;
      suite_total = 0;
    }
    suite_millis += r.millis;
    ++suite_total;
    if (r.pass) ++suite_pass;
    all_pass = all_pass && r.pass;
    std::cout << (r.pass ? "ok" : "FAIL") << "\t" << r.suite << "." << r.name
              << "\t" << r.millis << "ms\t" << r.detail << "\n";
  }
  flush_suite();
  std::cout << "verify " << suite << ": " << (all_pass ? "PASS" : "FAIL") << "\n";
  return all_pass ? kExitOk : kExitVerifyFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite-dimensional weak-value and quantum measurement simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  std::string preset_dir = "presets";
  long long seed_override = -1;
  int workers = default_workers();

  CLI::App* run = app.add_subcommand("run", "run a sweep from a config file");
  run->add_option("--config", config_path, "config file (TOML subset)")
      ->required();
  run->add_option("--out", out_path, "output CSV path")->required();
  run->add_option("--seed", seed_override, "seed recorded in the metadata");
  run->add_option("--workers", workers, "worker pool size (0 = hardware)");
  run->add_option("--presets", preset_dir, "preset directory");

  std::string suite;
  long long verify_seed = 1;
  CLI::App* verify = app.add_subcommand("verify", "run invariant suites");
  verify->add_option("suite", suite, "identities|channels|probe|cnot|decoherence|all")
      ->required();
  verify->add_option("--seed", verify_seed, "suite seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints its own message/help
    return kExitConfig;
  }

  try {
    if (run->parsed()) {
      return run_command(config_path, out_path, seed_override, workers,
                         preset_dir);
    }
    return verify_command(suite, static_cast<uint64_t>(verify_seed));
  } catch (const wvsim::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const wvsim::SimError& e) {
    std::cerr << "domain error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}
