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

#ifndef WVSIM_DECOHERENCE_HPP
#define WVSIM_DECOHERENCE_HPP

#include <functional>
#include <vector>

#include "wvsim/channels.hpp"
#include "wvsim/probe.hpp"

namespace wvsim {

// Target system coupled to an environment: H = h0 (x) 1_e + h1 with h0 on
// the target and h1 on target (x) environment. The environment is prepared
// in env_init and post-selected on env_final; env_basis is the complete
// orthonormal readout set. No probe-environment interaction.
struct EnvironmentModel {
  EnvironmentModel(QOperator h0, QOperator h1, QState env_init, QState env_final,
                   std::vector<QState> env_basis, double t_i, double t_0,
                   double t_f);

  QOperator h0;
  QOperator h1;
  QState env_init;
  QState env_final;
  std::vector<QState> env_basis;
  double t_i, t_0, t_f;
  int target_dim;
  int env_dim;
};

struct SlicingOptions {
  int slices = 512;            // per interval
  double doubling_tol = 1e-8;  // doubling the slices must move U, V less than this
  bool check_doubling = true;
};

// Time-ordered exponential T exp(-i integral h(t) dt) over [t0, t1] by
// uniform slicing, one fourth-order Magnus factor (two Gauss nodes plus the
// commutator term) per slice. Every factor is exactly unitary.
QOperator time_ordered_exponential(const std::function<Matrix(double)>& h,
                                   double t0, double t1, int slices);

struct DressedPropagators {
  QOperator u_full;  // U(t_0, t_i) on target (x) environment
  QOperator v_full;  // U(t_f, t_0) on target (x) environment
  QOperator u0;      // free target propagator over [t_i, t_0]
  QOperator v0;      // free target propagator over [t_0, t_f]
};

// Interaction-picture construction: U = (U0 (x) 1) K(t_0, t_i) and
// V = K(t_f, t_0) (V0 (x) 1), with the K factors sliced time-ordered
// exponentials of the h0-rotated coupling.
DressedPropagators dressed_propagators(const EnvironmentModel& env,
                                       const SlicingOptions& options = {});

// Kraus pairs E_m = <e_m|U|e_i>, F_m^dag = <e_f|V|e_m> from the sliced
// propagators. Normalization tolerance 1e-8 (slicing tolerance).
Channel dressed_channel(const EnvironmentModel& env,
                        const SlicingOptions& options = {});

// Weak value of A with respect to the channel-evolved two-state operator:
// Tr[E(|pre><post|) A] / Tr[E(|pre><post|)]. With h1 = 0 this reduces to the
// plain weak value with the free evolutions.
Complex decoherent_weak_value(const EnvironmentModel& env, const QState& pre,
                              const QState& post, const QOperator& a,
                              const SlicingOptions& options = {},
                              double overlap_floor = kDefaultOverlapFloor);

// Extension (not a closed-form result of the channel formalism): average of
// the branch weak values over all final environment readouts e_f in
// env_basis, weighted by the branch post-selection probabilities. Covers the
// common experimental situation where nobody post-selects the environment.
Complex decoherent_weak_value_env_averaged(const EnvironmentModel& env,
                                           const QState& pre, const QState& post,
                                           const QOperator& a,
                                           const SlicingOptions& options = {});

struct DecoherentShifts {
  double dq = 0, dp = 0;                // first-order formula values
  double oracle_dq = 0, oracle_dp = 0;  // tripartite brute-force evolution
  Complex weak_val{};                   // <A>_{E(W)}
  double success_prob = 0;              // joint target+environment post-selection
};

struct DecoherentShiftOptions {
  SlicingOptions slicing{};
  double max_g_weak_value = 0.01;  // |g <A>_{E(W)}| guard
  double overlap_floor = kDefaultOverlapFloor;
};

// Formula shifts dq = g Re[w] + m g Im[w] dVar[Q]/dt, dp = 2 g Var[P] Im[w]
// with w = <A>_{E(W)}, next to an exact target (x) environment (x) probe
// evolution with the impulsive A (x) P coupling at t_0 and joint
// post-selection. |formula - oracle| = O(g^2).
DecoherentShifts decoherent_probe_shifts(const EnvironmentModel& env,
                                         const QState& pre, const QState& post,
                                         const QOperator& a, const ProbeGrid& xi,
                                         double g,
                                         const DecoherentShiftOptions& options = {});

}  // namespace wvsim

#endif  // WVSIM_DECOHERENCE_HPP
