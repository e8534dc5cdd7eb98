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

#ifndef WVSIM_PROTECTIVE_HPP
#define WVSIM_PROTECTIVE_HPP

#include <functional>

#include "wvsim/probe.hpp"

namespace wvsim {

struct ProtectiveOptions {
  double min_gap = 1e-6;  // smallest admissible spectral gap of h_s(t)
  int min_steps = 16;
};

struct ProtectiveResult {
  double dq = 0;               // probe mean-position shift
  double target_fidelity = 0;  // |<E_i(T)| final target>|^2
};

// Trotterized evolution of target (x) probe under
// H(t) = H_s(t) + P^2/2m (+ V(Q)) + g(t) A (x) P over n_steps uniform slices
// of [0, total_time]. The target starts in the eigenstate of h_s(0) with the
// given ascending-order index. Adiabatically dq approaches
// integral of g(t) <E_i(t)|A|E_i(t)> dt and the fidelity approaches 1; a fast
// sweep simply reports fidelity < 1.
ProtectiveResult protective_measurement(
    const std::function<Matrix(double)>& h_s,
    const std::function<double(double)>& g_profile, const ProbeGrid& xi,
    const QOperator& a, double total_time, int eigenstate_index,
    int n_steps = 10000, const ProtectiveOptions& options = {});

}  // namespace wvsim

#endif  // WVSIM_PROTECTIVE_HPP
