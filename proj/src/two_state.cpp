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

#include "wvsim/two_state.hpp"

#include <cmath>

namespace wvsim {

namespace {

// Squared-amplitude scale below which every ABL path counts as vanished.
constexpr double kPathFloor = 1e-24;

}  // namespace

WOperator::WOperator(Matrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 1) {
    throw SimError(Guard::InvalidArgument, "W operator must be square");
  }
}

WOperator build_w(const PrePostSelection& sel) {
  const Vector forward = sel.u_before().matrix() * sel.pre().amps();
  const Vector backward = sel.u_after().matrix().adjoint() * sel.post().amps();
  WOperator w(forward * backward.adjoint());
  w.provenance_ = sel;
  return w;
}

Complex weak_value_from_w(const WOperator& w, const QOperator& a,
                          double overlap_floor) {
  require_same_dim(w.dim(), a.dim(), "W operator vs observable");
  const Complex tr = w.trace();
  if (std::abs(tr) <= overlap_floor) {
    throw SimError(Guard::NearOrthogonalSelection,
                   "|Tr W| = " + std::to_string(std::abs(tr)) +
                       " <= overlap floor " + std::to_string(overlap_floor));
  }
  return (w.matrix() * a.matrix()).trace() / tr;
}

AblDistribution abl_probabilities(const PrePostSelection& sel, const QOperator& a,
                                  double gap_tol) {
  require_same_dim(sel.dim(), a.dim(), "selection vs observable");
  SpectralProjectors spec = eigenprojectors(a, gap_tol);
  const Vector forward = sel.u_before().matrix() * sel.pre().amps();
  const Vector backward = sel.u_after().matrix().adjoint() * sel.post().amps();

  AblDistribution out;
  out.eigenvalues = spec.eigenvalues;
  out.probabilities.resize(spec.projectors.size());
  double total = 0.0;
  for (size_t k = 0; k < spec.projectors.size(); ++k) {
    const Complex amplitude = backward.dot(spec.projectors[k] * forward);
    out.probabilities[k] = std::norm(amplitude);
    total += out.probabilities[k];
  }
  if (total <= kPathFloor) {
    throw SimError(Guard::AllPathsVanish,
                   "every outcome amplitude vanishes for this selection");
  }
  for (double& p : out.probabilities) p /= total;
  return out;
}

std::vector<double> abl_from_w(const WOperator& w,
                               const std::vector<QOperator>& projectors) {
  if (projectors.empty()) {
    throw SimError(Guard::IncompleteBasis, "empty projector family");
  }
  const int d = w.dim();
  Matrix sum = Matrix::Zero(d, d);
  for (const QOperator& p : projectors) {
    require_same_dim(p.dim(), d, "projector vs W operator");
    if (max_abs(p.matrix() * p.matrix() - p.matrix()) > kConstructTol ||
        max_abs(p.matrix() - p.matrix().adjoint()) > kConstructTol) {
      throw SimError(Guard::NonProjector, "family member is not a projector");
    }
    sum += p.matrix();
  }
  if (max_abs(sum - Matrix::Identity(d, d)) > kAssertTol) {
    throw SimError(Guard::IncompleteBasis,
                   "projector family does not resolve the identity");
  }
  for (size_t i = 0; i < projectors.size(); ++i) {
    for (size_t j = i + 1; j < projectors.size(); ++j) {
      if (max_abs(projectors[i].matrix() * projectors[j].matrix()) > kAssertTol) {
        throw SimError(Guard::IncompleteBasis, "projector family not orthogonal");
      }
    }
  }

  std::vector<double> probs(projectors.size());
  double total = 0.0;
  for (size_t k = 0; k < projectors.size(); ++k) {
    probs[k] = std::norm((w.matrix() * projectors[k].matrix()).trace());
    total += probs[k];
  }
  if (total <= kPathFloor) {
    throw SimError(Guard::AllPathsVanish,
                   "every |Tr W P|^2 vanishes for this family");
  }
  for (double& p : probs) p /= total;
  return probs;
}

}  // namespace wvsim
