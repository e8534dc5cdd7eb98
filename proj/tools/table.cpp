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

#include "table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "wvsim/errors.hpp"

namespace wvsim::cli {

std::string format_double(double value) {
  char buffer[40];
  std::snprintf(buffer, sizeof(buffer), "%.17g", value);
  return buffer;
}

std::string ResultTable::to_csv() const {
  std::ostringstream out;
  for (const auto& [key, value] : metadata) {
    out << "# " << key << "=" << value << "\n";
  }
  for (size_t c = 0; c < columns.size(); ++c) {
    out << columns[c] << (c + 1 < columns.size() ? "," : "");
  }
  out << "\n";
  for (const std::vector<double>& row : rows) {
    if (row.size() != columns.size()) {
      throw SimError(Guard::NonFiniteResult, "row width does not match header");
    }
    for (size_t c = 0; c < row.size(); ++c) {
      if (!std::isfinite(row[c])) {
        throw SimError(Guard::NonFiniteResult,
                       "non-finite value in column '" + columns[c] + "'");
      }
      out << format_double(row[c]) << (c + 1 < row.size() ? "," : "");
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace wvsim::cli
