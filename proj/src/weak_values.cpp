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

#include "wvsim/weak_values.hpp"

#include <cmath>

namespace wvsim {

namespace {

// A post-selection overlap below this counts as exactly vanishing; the weak
// value is undefined there and the term carries zero probability weight.
constexpr double kVanishingOverlap = 1e-14;

void require_numerically_unitary(const QOperator& u, const char* what) {
  if (max_abs(u.matrix().adjoint() * u.matrix() -
              Matrix::Identity(u.dim(), u.dim())) > kConstructTol) {
    throw SimError(Guard::NonUnitary, what);
  }
}

}  // namespace

PrePostSelection::PrePostSelection(QState pre, QState post, QOperator u_before,
                                   QOperator u_after)
    : pre_(std::move(pre)),
      post_(std::move(post)),
      u_before_(std::move(u_before)),
      u_after_(std::move(u_after)) {
  require_same_dim(pre_.dim(), post_.dim(), "pre/post selection dims");
  require_same_dim(pre_.dim(), u_before_.dim(), "pre state vs U(t,t_i)");
  require_same_dim(pre_.dim(), u_after_.dim(), "pre state vs U(t_f,t)");
  require_numerically_unitary(u_before_, "U(t,t_i) must be unitary");
  require_numerically_unitary(u_after_, "U(t_f,t) must be unitary");
}

PrePostSelection PrePostSelection::trivial(QState pre, QState post) {
  const int d = pre.dim();
  return PrePostSelection(std::move(pre), std::move(post),
                          QOperator::identity(d), QOperator::identity(d));
}

Complex PrePostSelection::overlap() const {
  return post_.amps().dot(u_after_.matrix() * (u_before_.matrix() * pre_.amps()));
}

WeakValue weak_value(const PrePostSelection& sel, const QOperator& a,
                     double overlap_floor) {
  require_same_dim(sel.dim(), a.dim(), "selection vs observable");
  const Complex denom = sel.overlap();
  if (std::abs(denom) <= overlap_floor) {
    throw SimError(Guard::NearOrthogonalSelection,
                   "|<f|U|i>| = " + std::to_string(std::abs(denom)) +
                       " <= overlap floor " + std::to_string(overlap_floor));
  }
  const Vector forward = sel.u_before().matrix() * sel.pre().amps();
  const Vector backward = sel.u_after().matrix().adjoint() * sel.post().amps();
  const Complex numer = backward.dot(a.matrix() * forward);
  return WeakValue{numer / denom, denom};
}

std::vector<QState> computational_basis(int dim) {
  std::vector<QState> basis;
  basis.reserve(dim);
  for (int k = 0; k < dim; ++k) basis.push_back(QState::basis(dim, k));
  return basis;
}

void require_complete_orthonormal(const std::vector<QState>& basis, int dim) {
  Matrix sum = Matrix::Zero(dim, dim);
  for (const QState& phi : basis) {
    require_same_dim(phi.dim(), dim, "basis element dim");
    sum += phi.amps() * phi.amps().adjoint();
  }
  if (max_abs(sum - Matrix::Identity(dim, dim)) > kConstructTol) {
    throw SimError(Guard::IncompleteBasis,
                   "basis does not resolve the identity within 1e-10");
  }
}

Complex expectation_via_weak_values(const QState& psi, const QOperator& a,
                                    const std::vector<QState>& basis) {
  require_same_dim(psi.dim(), a.dim(), "state vs observable");
  require_complete_orthonormal(basis, psi.dim());
  Complex sum = 0.0;
  for (const QState& phi : basis) {
    const Complex overlap = inner(phi, psi);
    if (std::abs(overlap) < kVanishingOverlap) continue;
    const Complex h = phi.amps().dot(a.matrix() * psi.amps()) / overlap;
    sum += std::norm(overlap) * h;
  }
  return sum;
}

Complex variance_via_weak_values(const QState& psi, const QOperator& a,
                                 const std::vector<QState>& basis) {
  require_same_dim(psi.dim(), a.dim(), "state vs observable");
  require_complete_orthonormal(basis, psi.dim());
  double second_moment = 0.0;
  Complex first_moment = 0.0;
  for (const QState& phi : basis) {
    const Complex overlap = inner(phi, psi);
    const Complex numer = phi.amps().dot(a.matrix() * psi.amps());
    // |h_A|^2 dP = |<phi|A|psi>|^2 stays finite as dP -> 0.
    second_moment += std::norm(numer);
    if (std::abs(overlap) < kVanishingOverlap) continue;
    first_moment += std::norm(overlap) * (numer / overlap);
  }
  return second_moment - first_moment * first_moment;
}

double bayes_decomposition(const QState& psi, const QState& a,
                           const std::vector<QState>& basis) {
  require_same_dim(psi.dim(), a.dim(), "psi vs a");
  require_complete_orthonormal(basis, psi.dim());
  Complex sum = 0.0;
  for (const QState& phi : basis) {
    // <psi|phi><phi|a><a|psi>: the weak value times its probability weight,
    // written in product form so vanishing overlaps contribute 0 exactly.
    sum += inner(psi, phi) * inner(phi, a) * inner(a, psi);
  }
  if (std::abs(sum.imag()) > kConstructTol) {
    throw SimError(Guard::NonFiniteResult,
                   "bayes decomposition imaginary residue above 1e-10");
  }
  return sum.real();
}

Complex completeness_sum(const PrePostSelection& sel,
                         const std::vector<QState>& basis,
                         double overlap_floor) {
  require_complete_orthonormal(basis, sel.dim());
  Complex sum = 0.0;
  for (const QState& a : basis) {
    Matrix proj = a.amps() * a.amps().adjoint();
    sum += weak_value(sel, QOperator::projector(std::move(proj)), overlap_floor).value;
  }
  return sum;
}

double geometric_phase(const QState& psi1, const QState& psi2, const QState& psi3) {
  require_same_dim(psi1.dim(), psi2.dim(), "psi1 vs psi2");
  require_same_dim(psi1.dim(), psi3.dim(), "psi1 vs psi3");
  const Complex p12 = inner(psi1, psi2);
  const Complex p23 = inner(psi2, psi3);
  const Complex p31 = inner(psi3, psi1);
  for (const Complex& p : {p12, p23, p31}) {
    if (std::abs(p) < kVanishingOverlap) {
      throw SimError(Guard::VanishingOverlap,
                     "pairwise overlap vanishes; Bargmann phase undefined");
    }
  }
  return std::arg(p12 * p23 * p31);
}

}  // namespace wvsim
