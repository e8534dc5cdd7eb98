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

#include "wvsim/channels.hpp"

#include <cmath>

namespace wvsim {

namespace {

void require_normalized_family(const std::vector<Matrix>& family, int dim,
                               double tol, const char* which) {
  Matrix sum = Matrix::Zero(dim, dim);
  for (const Matrix& k : family) sum += k.adjoint() * k;
  if (max_abs(sum - Matrix::Identity(dim, dim)) > tol) {
    throw SimError(Guard::InvalidArgument,
                   std::string(which) + " Kraus family is not trace preserving");
  }
}

// <e_m| M |e_n> on the environment factor of a target (x) environment matrix.
Matrix env_matrix_element(const Matrix& m, const Vector& bra_env,
                          const Vector& ket_env, int target_dim, int env_dim) {
  Matrix out = Matrix::Zero(target_dim, target_dim);
  for (int i = 0; i < target_dim; ++i) {
    for (int j = 0; j < target_dim; ++j) {
      Complex sum = 0.0;
      for (int a = 0; a < env_dim; ++a) {
        for (int b = 0; b < env_dim; ++b) {
          sum += std::conj(bra_env(a)) * m(i * env_dim + a, j * env_dim + b) *
                 ket_env(b);
        }
      }
      out(i, j) = sum;
    }
  }
  return out;
}

}  // namespace

Channel::Channel(std::vector<Matrix> kraus_e,
                 std::optional<std::vector<Matrix>> kraus_f, double norm_tol,
                 double prune_tol) {
  if (kraus_e.empty()) {
    throw SimError(Guard::InvalidArgument, "channel needs at least one Kraus factor");
  }
  symmetric_ = !kraus_f.has_value();
  std::vector<Matrix> raw_f = symmetric_ ? kraus_e : std::move(*kraus_f);
  if (raw_f.size() != kraus_e.size()) {
    throw SimError(Guard::DimensionMismatch, "E and F families must pair up");
  }
  const int d = static_cast<int>(kraus_e.front().rows());
  for (size_t m = 0; m < kraus_e.size(); ++m) {
    if (kraus_e[m].rows() != d || kraus_e[m].cols() != d ||
        raw_f[m].rows() != d || raw_f[m].cols() != d) {
      throw SimError(Guard::DimensionMismatch, "Kraus factors must share one dim");
    }
    if (std::max(max_abs(kraus_e[m]), max_abs(raw_f[m])) < prune_tol) continue;
    e_.push_back(std::move(kraus_e[m]));
    f_.push_back(std::move(raw_f[m]));
  }
  if (e_.empty()) {
    throw SimError(Guard::InvalidArgument, "all Kraus factors pruned to zero");
  }
  require_normalized_family(e_, d, norm_tol, "forward (E)");
  require_normalized_family(f_, d, norm_tol, "backward (F)");
}

Channel Channel::symmetric(std::vector<Matrix> kraus, double norm_tol) {
  return Channel(std::move(kraus), std::nullopt, norm_tol);
}

Povm::Povm(std::vector<QOperator> elems) : elements(std::move(elems)) {
  if (elements.empty()) {
    throw SimError(Guard::InvalidArgument, "POVM needs at least one element");
  }
  const int d = elements.front().dim();
  Matrix sum = Matrix::Zero(d, d);
  for (const QOperator& m : elements) {
    require_same_dim(m.dim(), d, "POVM element dims");
    Eigen::SelfAdjointEigenSolver<Matrix> solver(m.matrix(), Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -kConstructTol) {
      throw SimError(Guard::InvalidArgument, "POVM element not PSD");
    }
    sum += m.matrix();
  }
  if (max_abs(sum - Matrix::Identity(d, d)) > kAssertTol) {
    throw SimError(Guard::IncompleteBasis, "POVM does not sum to the identity");
  }
}

Channel kraus_from_dilation(const QOperator& u, const QState& probe_init,
                            const std::vector<QState>& probe_basis,
                            int target_dim) {
  const int probe_dim = probe_init.dim();
  require_same_dim(u.dim(), target_dim * probe_dim, "dilation unitary dims");
  if (max_abs(u.matrix().adjoint() * u.matrix() -
              Matrix::Identity(u.dim(), u.dim())) > kConstructTol) {
    throw SimError(Guard::NonUnitary, "dilation requires a unitary");
  }
  require_complete_orthonormal(probe_basis, probe_dim);

  std::vector<Matrix> kraus;
  kraus.reserve(probe_basis.size());
  for (const QState& b : probe_basis) {
    kraus.push_back(env_matrix_element(u.matrix(), b.amps(), probe_init.amps(),
                                       target_dim, probe_dim));
  }
  return Channel::symmetric(std::move(kraus));
}

Channel channel_from_factorization(const QOperator& u, const QOperator& v,
                                   const QState& env_init, const QState& env_final,
                                   const std::vector<QState>& env_basis,
                                   int target_dim, double norm_tol) {
  const int env_dim = env_init.dim();
  require_same_dim(env_final.dim(), env_dim, "environment boundary states");
  require_same_dim(u.dim(), target_dim * env_dim, "U on target (x) environment");
  require_same_dim(v.dim(), target_dim * env_dim, "V on target (x) environment");
  require_complete_orthonormal(env_basis, env_dim);

  std::vector<Matrix> e_family;
  std::vector<Matrix> f_family;
  e_family.reserve(env_basis.size());
  f_family.reserve(env_basis.size());
  for (const QState& em : env_basis) {
    e_family.push_back(env_matrix_element(u.matrix(), em.amps(), env_init.amps(),
                                          target_dim, env_dim));
    // F_m^dag = <e_f| V |e_m>, so F_m is its adjoint.
    f_family.push_back(env_matrix_element(v.matrix(), env_final.amps(), em.amps(),
                                          target_dim, env_dim)
                           .adjoint());
  }
  return Channel(std::move(e_family), std::move(f_family), norm_tol);
}

DensityOp apply_to_density(const Channel& ch, const DensityOp& rho) {
  require_same_dim(ch.dim(), rho.dim(), "channel vs density operator");
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const Matrix& e : ch.kraus_e()) {
    out += e * rho.matrix() * e.adjoint();
  }
  return DensityOp(std::move(out));
}

WOperator apply_to_w(const Channel& ch, const WOperator& w) {
  require_same_dim(ch.dim(), w.dim(), "channel vs W operator");
  Matrix out = Matrix::Zero(w.dim(), w.dim());
  for (size_t m = 0; m < ch.size(); ++m) {
    out += ch.kraus_e()[m] * w.matrix() * ch.kraus_f()[m].adjoint();
  }
  return WOperator(std::move(out));
}

Povm povm_from_channel(const Channel& ch) {
  std::vector<QOperator> elements;
  elements.reserve(ch.size());
  for (const Matrix& e : ch.kraus_e()) {
    elements.push_back(QOperator::hermitian(e.adjoint() * e));
  }
  return Povm(std::move(elements));
}

std::vector<double> born_probabilities(const DensityOp& rho, const Povm& povm) {
  require_same_dim(rho.dim(), povm.elements.front().dim(), "state vs POVM");
  std::vector<double> probs;
  probs.reserve(povm.elements.size());
  double total = 0.0;
  for (const QOperator& m : povm.elements) {
    const Complex p = (rho.matrix() * m.matrix()).trace();
    if (p.real() < -1e-12) {
      throw SimError(Guard::NonFiniteResult, "negative Born probability");
    }
    probs.push_back(p.real());
    total += p.real();
  }
  if (std::abs(total - 1.0) > kAssertTol) {
    throw SimError(Guard::IncompleteBasis, "Born probabilities do not sum to 1");
  }
  return probs;
}

double s_matrix_identity_check(const Channel& ch, const QOperator& u,
                               const QOperator& v, const QState& env_init,
                               const QState& env_final) {
  const int target_dim = ch.dim();
  const int env_dim = env_init.dim();
  require_same_dim(u.dim(), target_dim * env_dim, "U dims in S-matrix check");
  require_same_dim(v.dim(), target_dim * env_dim, "V dims in S-matrix check");

  Matrix lhs = Matrix::Zero(target_dim, target_dim);
  for (size_t m = 0; m < ch.size(); ++m) {
    lhs += ch.kraus_f()[m].adjoint() * ch.kraus_e()[m];
  }
  const Matrix rhs = env_matrix_element(v.matrix() * u.matrix(), env_final.amps(),
                                        env_init.amps(), target_dim, env_dim);
  return max_abs(lhs - rhs);
}

Channel compose(const Channel& second, const Channel& first) {
  require_same_dim(second.dim(), first.dim(), "channel composition dims");
  std::vector<Matrix> e_family;
  std::vector<Matrix> f_family;
  e_family.reserve(second.size() * first.size());
  f_family.reserve(second.size() * first.size());
  for (size_t j = 0; j < second.size(); ++j) {
    for (size_t k = 0; k < first.size(); ++k) {
      e_family.push_back(second.kraus_e()[j] * first.kraus_e()[k]);
      f_family.push_back(second.kraus_f()[j] * first.kraus_f()[k]);
    }
  }
  return Channel(std::move(e_family), std::move(f_family));
}

double choi_minimum_eigenvalue(const Channel& ch) {
  const int d = ch.dim();
  Matrix choi = Matrix::Zero(d * d, d * d);
  for (const Matrix& e : ch.kraus_e()) {
    // |e>> = vec(E) with row-major pairing (i, j) -> i*d + j.
    Vector vec(d * d);
    for (int i = 0; i < d; ++i) {
      for (int j = 0; j < d; ++j) vec(i * d + j) = e(i, j);
    }
    choi += vec * vec.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(choi, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

}  // namespace wvsim
