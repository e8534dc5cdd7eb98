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

#ifndef WVSIM_QUBIT_HPP
#define WVSIM_QUBIT_HPP

#include <vector>

#include "wvsim/weak_values.hpp"

namespace wvsim {

struct BlochVector {
  Eigen::Vector3d r;  // |r| <= 1; pure states sit on the sphere

  explicit BlochVector(Eigen::Vector3d v);
  static BlochVector from_state(const QState& psi);
  bool pure(double tol = 1e-12) const { return std::abs(r.norm() - 1.0) <= tol; }
};

QState state_from_bloch(const BlochVector& b);

QOperator pauli_x();
QOperator pauli_y();
QOperator pauli_z();
QOperator pauli_dot(const Eigen::Vector3d& n);  // n . sigma

// <n.sigma>_w = n . (r_i + r_f + i r_i x r_f) / (1 + r_i . r_f).
// Throws AntipodalSelection when 1 + r_i.r_f is at or below the floor.
Complex qubit_weak_value(const BlochVector& r_i, const BlochVector& r_f,
                         const Eigen::Vector3d& n,
                         double floor = kDefaultOverlapFloor);

struct QubitShiftResult {
  double formula = 0;    // first-order shift of <q.sigma>
  double exact = 0;      // post-selected qubit-probe simulation
  Complex weak_val{};    // <A>_w entering the formula
  double re_coeff = 0;   // 2 g (q x v).m
  double im_coeff = 0;   // 2 g (v.q - (v.m)(q.m))
};

// Probe is a qubit with Bloch vector m (mixed allowed), coupling axis v,
// readout axis q. The exact twin evolves with exp(-i g A (x) v.sigma) and
// post-selects the target; formula and exact agree to O(g^2).
QubitShiftResult qubit_probe_shift(const BlochVector& r_i, const BlochVector& r_f,
                                   const BlochVector& probe_m,
                                   const Eigen::Vector3d& v,
                                   const Eigen::Vector3d& q, const QOperator& a,
                                   double g, double floor = kDefaultOverlapFloor);

struct CnotReadout {
  double prob = 0;          // closed-form outcome probability
  double prob_circuit = 0;  // brute-force C-NOT circuit + post-selection
  double r = 0;             // (prob - eta^2) / (gamma^2 - eta^2)
};

// Target prepared in alpha|0> + beta|1>, probe in gamma|0> + eta|1>
// (gamma, eta real), C-NOT, post-selection on `post`, probe readout k.
CnotReadout cnot_readout(Complex alpha, Complex beta, double gamma_p, double eta_p,
                         const QState& post, int outcome);

// Outcome probability only; well defined also at gamma = eta.
double cnot_outcome_probability(Complex alpha, Complex beta, double gamma_p,
                                double eta_p, const QState& post, int outcome);

struct CnotEstimate {
  double re_estimate = 0;   // intercept of the R(eps) fit; estimates Re<Pi_k>_w
  double eps_slope = 0;     // fitted dR/deps at eps = 0
  double eps_curvature = 0; // fitted second-order coefficient
  Complex weak_val{};       // ground-truth <Pi_k>_w
  double slope_prediction = 0;
};

// Sweeps the probe preparation gamma = sqrt(1/2 + eps), eta = sqrt(1/2 - eps)
// and fits R[k](eps) by least squares with a polynomial model of
// degree min(4, n-1). Exact expansion
// of the readout: R(eps) = Re(w) + [ -Re(w) + |w|^2 + (1 - S)/2 ] eps + O(eps^2)
// with w = <Pi_k>_w and S = |<Pi_0>_w|^2 + |<Pi_1>_w|^2; the linear
// coefficient vanishes identically for a qubit because <Pi_0>_w + <Pi_1>_w = 1.
// The intercept recovers Re(w); |w|^2 (hence Im(w) up to sign) sits in the
// curvature (1 - S)(2 Re(w) - 1).
CnotEstimate cnot_weak_value_estimate(const QState& pre, const QState& post,
                                      int outcome,
                                      const std::vector<double>& eps_list);

}  // namespace wvsim

#endif  // WVSIM_QUBIT_HPP
