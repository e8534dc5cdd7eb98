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

#ifndef WVSIM_TOOLS_TABLE_HPP
#define WVSIM_TOOLS_TABLE_HPP

#include <string>
#include <utility>
#include <vector>

namespace wvsim::cli {

// Plot-ready numeric table. Serialized as RFC-4180 CSV with a mandatory
// header row, '.' decimal separator and 17 significant digits; metadata goes
// into leading '#' comment lines so the body stays byte-stable for a fixed
// (config, seed) pair. Complex quantities are emitted as re/im column pairs
// by the scenarios.
struct ResultTable {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;  // throws SimError(NonFiniteResult) on NaN/Inf
};

std::string format_double(double value);  // %.17g

}  // namespace wvsim::cli

#endif  // WVSIM_TOOLS_TABLE_HPP
