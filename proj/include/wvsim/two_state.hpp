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

#ifndef WVSIM_TWO_STATE_HPP
#define WVSIM_TWO_STATE_HPP

#include <optional>
#include <vector>

#include "wvsim/weak_values.hpp"

namespace wvsim {

// Rank-one two-state operator W = U(t,t_i)|i><f|U(t_f,t). Stored as a full
// matrix so channel outputs (rank > 1) and pristine W operators share one
// type; provenance keeps the rank-one structure when it is known.
class WOperator {
 public:
  explicit WOperator(Matrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  Complex trace() const { return m_.trace(); }
  const std::optional<PrePostSelection>& provenance() const { return provenance_; }

 private:
  friend WOperator build_w(const PrePostSelection& sel);
  Matrix m_;
  std::optional<PrePostSelection> provenance_;
};

// W = U_before |i><f| U_after; Tr W equals the selection overlap.
WOperator build_w(const PrePostSelection& sel);

// <A>_W = Tr(W A) / Tr(W). Throws NearOrthogonalSelection when |Tr W| is at
// or below the floor.
Complex weak_value_from_w(const WOperator& w, const QOperator& a,
                          double overlap_floor = kDefaultOverlapFloor);

struct AblDistribution {
  std::vector<double> eigenvalues;    // one entry per (possibly degenerate) outcome
  std::vector<double> probabilities;  // same order, sums to 1
};

// Conditional probabilities of intermediate projective outcomes of a given
// both boundary states. Degenerate eigenvalues are aggregated through their
// eigenspace projectors (clustered with gap_tol), so each term is
// |<f| U_after P_a U_before |i>|^2 up to normalization.
AblDistribution abl_probabilities(const PrePostSelection& sel, const QOperator& a,
                                  double gap_tol = 1e-8);

// Same distribution from the W operator: Pr[a_n] proportional to
// |Tr(W P_{a_n})|^2 over a complete orthogonal projector family.
std::vector<double> abl_from_w(const WOperator& w,
                               const std::vector<QOperator>& projectors);

}  // namespace wvsim

#endif  // WVSIM_TWO_STATE_HPP
