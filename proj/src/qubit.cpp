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

#include "wvsim/qubit.hpp"

#include <cmath>

namespace wvsim {

namespace {

constexpr Complex kI{0.0, 1.0};

Matrix cnot_matrix() {
  Matrix u = Matrix::Zero(4, 4);
  u(0, 0) = 1;  // |00> -> |00>
  u(1, 1) = 1;  // |01> -> |01>
  u(2, 3) = 1;  // |11> -> |10>
  u(3, 2) = 1;  // |10> -> |11>
  return u;
}

void require_unit_axis(const Eigen::Vector3d& v, const char* what) {
  if (std::abs(v.norm() - 1.0) > 1e-9) {
    throw SimError(Guard::InvalidArgument, std::string(what) + " must be a unit vector");
  }
}

}  // namespace

BlochVector::BlochVector(Eigen::Vector3d v) : r(std::move(v)) {
  if (r.norm() > 1.0 + 1e-9) {
    throw SimError(Guard::InvalidArgument, "Bloch vector leaves the unit ball");
  }
}

BlochVector BlochVector::from_state(const QState& psi) {
  require_same_dim(psi.dim(), 2, "Bloch vector from state");
  const Complex a = psi.amp(0);
  const Complex b = psi.amp(1);
  Eigen::Vector3d r;
  r.x() = 2.0 * (std::conj(a) * b).real();
  r.y() = 2.0 * (std::conj(a) * b).imag();
  r.z() = std::norm(a) - std::norm(b);
  return BlochVector(r);
}

QState state_from_bloch(const BlochVector& b) {
  if (!b.pure(1e-9)) {
    throw SimError(Guard::InvalidArgument,
                   "only unit Bloch vectors correspond to pure states");
  }
  const double z = b.r.z();
  if (1.0 + z < 1e-14) return QState::basis(2, 1);
  Vector amps(2);
  const double s = std::sqrt(2.0 * (1.0 + z));
  amps(0) = Complex(1.0 + z, 0.0) / s;
  amps(1) = Complex(b.r.x(), b.r.y()) / s;
  return QState(std::move(amps));
}

QOperator pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return QOperator::hermitian(std::move(m));
}

QOperator pauli_y() {
  Matrix m(2, 2);
  m << 0, -kI, kI, 0;
  return QOperator::hermitian(std::move(m));
}

QOperator pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return QOperator::hermitian(std::move(m));
}

QOperator pauli_dot(const Eigen::Vector3d& n) {
  Matrix m(2, 2);
  m(0, 0) = n.z();
  m(0, 1) = Complex(n.x(), -n.y());
  m(1, 0) = Complex(n.x(), n.y());
  m(1, 1) = -n.z();
  return QOperator::hermitian(std::move(m));
}

Complex qubit_weak_value(const BlochVector& r_i, const BlochVector& r_f,
                         const Eigen::Vector3d& n, double floor) {
  const double denom = 1.0 + r_i.r.dot(r_f.r);
  if (denom <= floor) {
    throw SimError(Guard::AntipodalSelection,
                   "pre and post Bloch vectors are (nearly) antipodal");
  }
  const Eigen::Vector3d real_part = r_i.r + r_f.r;
  const Eigen::Vector3d imag_part = r_i.r.cross(r_f.r);
  return Complex(n.dot(real_part), n.dot(imag_part)) / denom;
}

QubitShiftResult qubit_probe_shift(const BlochVector& r_i, const BlochVector& r_f,
                                   const BlochVector& probe_m,
                                   const Eigen::Vector3d& v,
                                   const Eigen::Vector3d& q, const QOperator& a,
                                   double g, double floor) {
  require_unit_axis(v, "coupling axis v");
  require_unit_axis(q, "readout axis q");
  require_same_dim(a.dim(), 2, "qubit observable");
  if (1.0 + r_i.r.dot(r_f.r) <= floor) {
    throw SimError(Guard::AntipodalSelection,
                   "pre and post Bloch vectors are (nearly) antipodal");
  }

  const QState pre = state_from_bloch(r_i);
  const QState post = state_from_bloch(r_f);
  const WeakValue w = weak_value(PrePostSelection::trivial(pre, post), a, floor);

  QubitShiftResult out;
  out.weak_val = w.value;
  const Eigen::Vector3d& m = probe_m.r;
  out.re_coeff = 2.0 * g * (q.cross(v)).dot(m);
  out.im_coeff = 2.0 * g * (v.dot(q) - v.dot(m) * q.dot(m));
  out.formula = out.re_coeff * w.value.real() + out.im_coeff * w.value.imag();

  // Exact twin: rho_probe = (1 + m.sigma)/2, evolve with exp(-i g A (x) v.sigma),
  // post-select the target, compare <q.sigma> before and after.
  const Matrix rho_probe =
      0.5 * (Matrix::Identity(2, 2) + pauli_dot(m).matrix());
  const Matrix rho_total = kron(pre.amps() * pre.amps().adjoint(), rho_probe);
  const QOperator coupling = QOperator::hermitian(kron(a.matrix(), pauli_dot(v).matrix()));
  const Matrix u = matrix_exponential(coupling, Complex(0.0, -g)).matrix();
  const Matrix evolved = u * rho_total * u.adjoint();

  Matrix probe_after = Matrix::Zero(2, 2);
  for (int s1 = 0; s1 < 2; ++s1) {
    for (int s2 = 0; s2 < 2; ++s2) {
      probe_after += std::conj(post.amp(s1)) * post.amp(s2) *
                     evolved.block(2 * s1, 2 * s2, 2, 2);
    }
  }
  const Complex denom = probe_after.trace();
  if (std::abs(denom) < 1e-28) {
    throw SimError(Guard::AllPathsVanish, "post-selection never succeeds");
  }
  const Matrix q_sigma = pauli_dot(q).matrix();
  const double before = (rho_probe * q_sigma).trace().real();
  const double after = ((probe_after * q_sigma).trace() / denom).real();
  out.exact = after - before;
  return out;
}

double cnot_outcome_probability(Complex alpha, Complex beta, double gamma_p,
                                double eta_p, const QState& post, int outcome) {
  if (std::abs(std::norm(alpha) + std::norm(beta) - 1.0) > kConstructTol) {
    throw SimError(Guard::InvalidArgument, "target amplitudes not normalized");
  }
  if (std::abs(gamma_p * gamma_p + eta_p * eta_p - 1.0) > kConstructTol) {
    throw SimError(Guard::InvalidArgument, "probe amplitudes not normalized");
  }
  require_same_dim(post.dim(), 2, "post-selection state");
  if (outcome != 0 && outcome != 1) {
    throw SimError(Guard::InvalidArgument, "outcome must be 0 or 1");
  }

  Vector in(4);
  in(0) = alpha * gamma_p;  // |00>
  in(1) = alpha * eta_p;    // |01>
  in(2) = beta * gamma_p;   // |10>
  in(3) = beta * eta_p;     // |11>
  const Vector state = cnot_matrix() * in;

  Complex amp[2];
  for (int k = 0; k < 2; ++k) {
    amp[k] = std::conj(post.amp(0)) * state(0 * 2 + k) +
             std::conj(post.amp(1)) * state(1 * 2 + k);
  }
  const double total = std::norm(amp[0]) + std::norm(amp[1]);
  if (total <= 1e-24) {
    throw SimError(Guard::AllPathsVanish, "both probe outcomes have zero amplitude");
  }
  return std::norm(amp[outcome]) / total;
}

CnotReadout cnot_readout(Complex alpha, Complex beta, double gamma_p, double eta_p,
                         const QState& post, int outcome) {
  CnotReadout out;
  out.prob_circuit =
      cnot_outcome_probability(alpha, beta, gamma_p, eta_p, post, outcome);

  // Closed form: |(gamma - eta) <Pi_k>_w + eta|^2 over
  // 1 - (gamma - eta)^2 (1 - sum_m |<Pi_m>_w|^2), scaled back by the
  // selection overlap when the weak values are ill defined.
  const Complex overlap =
      std::conj(post.amp(0)) * alpha + std::conj(post.amp(1)) * beta;
  const Complex c0 = std::conj(post.amp(0)) * alpha;
  const Complex c1 = std::conj(post.amp(1)) * beta;
  if (std::abs(overlap) > 1e-14) {
    const Complex w0 = c0 / overlap;
    const Complex w1 = c1 / overlap;
    const Complex wk = (outcome == 0) ? w0 : w1;
    const double d = gamma_p - eta_p;
    const double num = std::norm(d * wk + eta_p);
    const double den = 1.0 - d * d * (1.0 - std::norm(w0) - std::norm(w1));
    out.prob = num / den;
  } else {
    // Orthogonal selection: same expression before dividing by the overlap.
    const double d = gamma_p - eta_p;
    const double n0 = std::norm(d * c0 + eta_p * overlap);
    const double n1 = std::norm(d * c1 + eta_p * overlap);
    if (n0 + n1 <= 1e-24) {
      throw SimError(Guard::AllPathsVanish, "both probe outcomes have zero amplitude");
    }
    out.prob = (outcome == 0 ? n0 : n1) / (n0 + n1);
  }

  const double strength = gamma_p * gamma_p - eta_p * eta_p;
  if (std::abs(strength) < 1e-12) {
    throw SimError(Guard::GammaEqualsEta,
                   "gamma^2 = eta^2: zero measurement strength, R undefined");
  }
  out.r = (out.prob - eta_p * eta_p) / strength;
  return out;
}

CnotEstimate cnot_weak_value_estimate(const QState& pre, const QState& post,
                                      int outcome,
                                      const std::vector<double>& eps_list) {
  if (eps_list.size() < 3) {
    throw SimError(Guard::DegenerateFit, "need at least 3 eps points");
  }
  require_same_dim(pre.dim(), 2, "pre-selection state");
  require_same_dim(post.dim(), 2, "post-selection state");
  for (double eps : eps_list) {
    if (!(std::abs(eps) < 0.2)) {
      throw SimError(Guard::InvalidArgument, "eps must lie in (-0.2, 0.2)");
    }
    if (std::abs(eps) < 1e-6) {
      throw SimError(Guard::GammaEqualsEta,
                     "eps too close to 0: R is ill-conditioned there");
    }
  }

  const Complex alpha = pre.amp(0);
  const Complex beta = pre.amp(1);
  // R(eps) has no cubic term, so a quartic model pins the slope without
  // contamination from the (large for amplified weak values) eps^4 term.
  const int degree =
      std::min<int>(4, static_cast<int>(eps_list.size()) - 1);
  Eigen::MatrixXd design(eps_list.size(), degree + 1);
  Eigen::VectorXd readout(eps_list.size());
  for (size_t k = 0; k < eps_list.size(); ++k) {
    const double eps = eps_list[k];
    const double gamma_p = std::sqrt(0.5 + eps);
    const double eta_p = std::sqrt(0.5 - eps);
    readout(static_cast<Eigen::Index>(k)) =
        cnot_readout(alpha, beta, gamma_p, eta_p, post, outcome).r;
    double power = 1.0;
    for (int c = 0; c <= degree; ++c) {
      design(static_cast<Eigen::Index>(k), c) = power;
      power *= eps;
    }
  }
  const Eigen::VectorXd fit = design.colPivHouseholderQr().solve(readout);

  CnotEstimate out;
  out.re_estimate = fit(0);
  out.eps_slope = fit(1);
  out.eps_curvature = fit(2);

  const Complex overlap =
      std::conj(post.amp(0)) * alpha + std::conj(post.amp(1)) * beta;
  if (std::abs(overlap) <= kDefaultOverlapFloor) {
    throw SimError(Guard::NearOrthogonalSelection,
                   "ground-truth weak value undefined for orthogonal selection");
  }
  const Complex w0 = std::conj(post.amp(0)) * alpha / overlap;
  const Complex w1 = std::conj(post.amp(1)) * beta / overlap;
  const Complex wk = (outcome == 0) ? w0 : w1;
  out.weak_val = wk;
  const double s = std::norm(w0) + std::norm(w1);
  out.slope_prediction = -wk.real() + std::norm(wk) + 0.5 * (1.0 - s);
  return out;
}

}  // namespace wvsim
