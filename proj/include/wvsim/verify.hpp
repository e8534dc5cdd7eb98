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

#ifndef WVSIM_VERIFY_HPP
#define WVSIM_VERIFY_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace wvsim {

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  double millis = 0;
  std::string detail;
};

// Suites: identities, channels, probe, cnot, decoherence, all.
// Deterministic for a fixed seed. Unknown suite names throw
// SimError(InvalidArgument).
std::vector<CheckResult> run_verify_suite(const std::string& suite, uint64_t seed);

std::vector<std::string> verify_suite_names();

}  // namespace wvsim

#endif  // WVSIM_VERIFY_HPP
