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

#ifndef WVSIM_ERRORS_HPP
#define WVSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wvsim {

// Every numeric guard in the library surfaces as one of these names so that
// callers (and the CLI) can report the guard instead of emitting NaNs.
enum class Guard {
  DimensionMismatch,
  DimensionLimit,
  ZeroVector,
  NonHermitian,
  NonUnitary,
  NonProjector,
  InvalidDensity,
  IncompleteBasis,
  NearOrthogonalSelection,
  VanishingOverlap,
  AllPathsVanish,
  AntipodalSelection,
  GammaEqualsEta,
  DegenerateFit,
  GridResolution,
  GridWindow,
  SpectralGapViolation,
  InsufficientSteps,
  SlicingNonConvergence,
  NonFiniteResult,
  InvalidArgument,
};

const char* guard_name(Guard guard);

class SimError : public std::runtime_error {
 public:
  SimError(Guard guard, const std::string& message)
      : std::runtime_error(std::string(guard_name(guard)) + ": " + message),
        guard_(guard) {}

  Guard guard() const { return guard_; }

 private:
  Guard guard_;
};

}  // namespace wvsim

#endif  // WVSIM_ERRORS_HPP
