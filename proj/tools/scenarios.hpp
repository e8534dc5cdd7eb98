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

#ifndef WVSIM_TOOLS_SCENARIOS_HPP
#define WVSIM_TOOLS_SCENARIOS_HPP

#include "config.hpp"
#include "table.hpp"

namespace wvsim::cli {

// Runs the configured sweep and assembles the result table. Rows appear in
// sweep order regardless of worker completion order; `workers <= 0` picks the
// hardware concurrency. Deterministic for a fixed (config, seed).
ResultTable run_scenario(const RunConfig& config, int workers);

}  // namespace wvsim::cli

#endif  // WVSIM_TOOLS_SCENARIOS_HPP
