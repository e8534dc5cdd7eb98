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

#ifndef WVSIM_WEAK_VALUES_HPP
#define WVSIM_WEAK_VALUES_HPP

#include <vector>

#include "wvsim/core.hpp"

namespace wvsim {

// Pre-selected ket |i>, post-selected bra <f| and the unitary evolutions
// sandwiching the intermediate time: U(t, t_i) before, U(t_f, t) after.
class PrePostSelection {
 public:
  PrePostSelection(QState pre, QState post, QOperator u_before, QOperator u_after);

  // Identity evolutions on both sides.
  static PrePostSelection trivial(QState pre, QState post);

  int dim() const { return pre_.dim(); }
  const QState& pre() const { return pre_; }
  const QState& post() const { return post_; }
  const QOperator& u_before() const { return u_before_; }
  const QOperator& u_after() const { return u_after_; }

  // <f| U(t_f,t) U(t,t_i) |i>. A small modulus marks a nearly orthogonal
  // selection; it is reported by the operations that divide by it rather than
  // rejected here, so amplification studies stay expressible.
  Complex overlap() const;

 private:
  QState pre_;
  QState post_;
  QOperator u_before_;
  QOperator u_after_;
};

struct WeakValue {
  Complex value;
  Complex overlap;  // the denominator <f|U(t_f,t_i)|i>
};

// <f|U_after A U_before|i> / <f|U_after U_before|i>.
// Throws NearOrthogonalSelection when |overlap| <= overlap_floor.
WeakValue weak_value(const PrePostSelection& sel, const QOperator& a,
                     double overlap_floor = kDefaultOverlapFloor);

std::vector<QState> computational_basis(int dim);

// Throws IncompleteBasis unless sum_k |phi_k><phi_k| = 1 within 1e-10.
void require_complete_orthonormal(const std::vector<QState>& basis, int dim);

// Sum over a complete orthonormal post-selection basis of
// |<phi|psi>|^2 <A>_w(pre=psi, post=phi). Equals <psi|A|psi>. Terms with
// vanishing overlap carry zero probability weight and contribute 0.
Complex expectation_via_weak_values(const QState& psi, const QOperator& a,
                                    const std::vector<QState>& basis);

// Second moment minus squared first moment of the weak-value random variable.
// The |h_A|^2 dP integrand is evaluated in its product form |<phi|A|psi>|^2,
// which is the continuous extension at vanishing dP. Equals
// <psi|A^2|psi> - <psi|A|psi>^2.
Complex variance_via_weak_values(const QState& psi, const QOperator& a,
                                 const std::vector<QState>& basis);

// sum_phi <|a><a|>_w(psi->phi) |<phi|psi>|^2 = |<a|psi>|^2.
double bayes_decomposition(const QState& psi, const QState& a,
                           const std::vector<QState>& basis);

// sum over basis projectors of their weak values; identically 1.
Complex completeness_sum(const PrePostSelection& sel,
                         const std::vector<QState>& basis,
                         double overlap_floor = kDefaultOverlapFloor);

// arg[<psi1|psi2><psi2|psi3><psi3|psi1>] in (-pi, pi]. Equal to the argument
// of the weak value of |psi2><psi2| with pre psi3 and post psi1.
double geometric_phase(const QState& psi1, const QState& psi2, const QState& psi3);

}  // namespace wvsim

#endif  // WVSIM_WEAK_VALUES_HPP
