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

#ifndef WVSIM_RNG_HPP
#define WVSIM_RNG_HPP

#include <cstdint>
#include <random>

#include "wvsim/core.hpp"

// Seeded random instances for the verification suites and tests.
// Distributions are sampled from raw mt19937_64 output (not the
// implementation-defined std distributions) so that a given seed produces the
// same instance on every platform.

namespace wvsim {

class Rng {
 public:
  explicit Rng(uint64_t seed) : engine_(seed) {}

  // Uniform in [0, 1).
  double uniform();
  double uniform(double lo, double hi);
  int uniform_int(int lo, int hi);  // inclusive bounds
  double gaussian();                // Box-Muller from uniform bits

  Vector ginibre_vector(int dim);   // i.i.d. complex gaussian entries
  QState random_state(int dim);
  QOperator random_hermitian(int dim);       // entries O(1)
  QOperator random_unitary(int dim);         // Haar via QR with phase fix
  QOperator random_projector(int dim, int rank);
  DensityOp random_density(int dim);

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace wvsim

#endif  // WVSIM_RNG_HPP
