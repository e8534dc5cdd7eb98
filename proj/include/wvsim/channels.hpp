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

#ifndef WVSIM_CHANNELS_HPP
#define WVSIM_CHANNELS_HPP

#include <optional>
#include <vector>

#include "wvsim/two_state.hpp"

namespace wvsim {

// Finite Kraus family pairs (E_m, F_m). The forward family E acts on density
// operators; the pair acts on W operators as sum_m E_m W F_m^dag. The F
// family is stored explicitly even when it equals E: the forward/backward
// asymmetry is the point of the two-sided representation.
class Channel {
 public:
  // Both normalizations sum_m E_m^dag E_m = 1 and sum_m F_m^dag F_m = 1 are
  // required within norm_tol. Pairs with max(|E_m|, |F_m|) below prune_tol
  // are dropped (dilations produce many numerically-zero factors).
  Channel(std::vector<Matrix> kraus_e,
          std::optional<std::vector<Matrix>> kraus_f = std::nullopt,
          double norm_tol = kAssertTol, double prune_tol = 1e-12);

  static Channel symmetric(std::vector<Matrix> kraus,
                           double norm_tol = kAssertTol);

  int dim() const { return static_cast<int>(e_.front().rows()); }
  size_t size() const { return e_.size(); }
  bool symmetric_families() const { return symmetric_; }
  const std::vector<Matrix>& kraus_e() const { return e_; }
  const std::vector<Matrix>& kraus_f() const { return f_; }

 private:
  std::vector<Matrix> e_;
  std::vector<Matrix> f_;
  bool symmetric_ = false;
};

struct Povm {
  explicit Povm(std::vector<QOperator> elements);  // PSD + completeness checks
  std::vector<QOperator> elements;
};

// E_m = <b_m| U |phi>_p for a unitary U on target (x) probe, the probe
// prepared in probe_init and read out in probe_basis.
Channel kraus_from_dilation(const QOperator& u, const QState& probe_init,
                            const std::vector<QState>& probe_basis,
                            int target_dim);

// Two-sided factorization E_m = <e_m|U|e_i>, F_m^dag = <e_f|V|e_m> for
// unitaries U, V on target (x) environment. Slightly relaxed norm_tol admits
// sliced propagators.
Channel channel_from_factorization(const QOperator& u, const QOperator& v,
                                   const QState& env_init, const QState& env_final,
                                   const std::vector<QState>& env_basis,
                                   int target_dim, double norm_tol = kAssertTol);

DensityOp apply_to_density(const Channel& ch, const DensityOp& rho);

// sum_m E_m W F_m^dag; in general no longer rank one.
WOperator apply_to_w(const Channel& ch, const WOperator& w);

Povm povm_from_channel(const Channel& ch);

std::vector<double> born_probabilities(const DensityOp& rho, const Povm& povm);

// Max-norm residual of sum_m F_m^dag E_m against <e_f| V U |e_i>, the
// environment matrix element of the full evolution (the S-matrix element).
double s_matrix_identity_check(const Channel& ch, const QOperator& u,
                               const QOperator& v, const QState& env_init,
                               const QState& env_final);

// Merged family {E2_j E1_k} representing second after first.
Channel compose(const Channel& second, const Channel& first);

// Diagnostic only: smallest eigenvalue of the Choi matrix of the E family
// (>= -tol for a CP map). User-supplied Kraus families are CP by
// construction, so this is not run on the hot path.
double choi_minimum_eigenvalue(const Channel& ch);

}  // namespace wvsim

#endif  // WVSIM_CHANNELS_HPP
