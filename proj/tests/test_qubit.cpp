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

#include <doctest.h>

#include "oracles.hpp"
#include "wvsim/qubit.hpp"
#include "wvsim/two_state.hpp"

using namespace wvsim;
using namespace wvsim::testing;

namespace {
const Eigen::Vector3d kX{1, 0, 0};
const Eigen::Vector3d kY{0, 1, 0};
const Eigen::Vector3d kZ{0, 0, 1};
}  // namespace

TEST_CASE("bloch vector round trips") {
  Rng rng(157);
  for (int trial = 0; trial < 20; ++trial) {
    QState psi = rng.random_state(2);
    BlochVector b = BlochVector::from_state(psi);
    CHECK(b.pure(1e-12));
    QState back = state_from_bloch(b);
    // Equal up to a global phase.
    CHECK(std::abs(std::abs(inner(psi, back)) - 1.0) < 1e-12);
  }
  CHECK(state_from_bloch(BlochVector(-kZ)).amp(1) == Complex(1, 0));
}

TEST_CASE("qubit weak value closed form") {
  CHECK(std::abs(qubit_weak_value(BlochVector(kZ), BlochVector(kZ), kZ) -
                 Complex(1, 0)) < 1e-14);
  // r_i = x, r_f = z, n = y: pure cross-product term; x cross z = -y,
  // so the value is -i (confirmed by the state-space route below).
  CHECK(std::abs(qubit_weak_value(BlochVector(kX), BlochVector(kZ), kY) -
                 Complex(0, -1)) < 1e-14);

  CHECK_THROWS_AS(qubit_weak_value(BlochVector(kZ), BlochVector(-kZ), kX),
                  SimError);

  Rng rng(163);
  for (int trial = 0; trial < 50; ++trial) {
    Eigen::Vector3d ri(rng.gaussian(), rng.gaussian(), rng.gaussian());
    Eigen::Vector3d rf(rng.gaussian(), rng.gaussian(), rng.gaussian());
    Eigen::Vector3d n(rng.gaussian(), rng.gaussian(), rng.gaussian());
    ri.normalize();
    rf.normalize();
    n.normalize();
    if (1.0 + ri.dot(rf) < 0.1) continue;
    Complex closed = qubit_weak_value(BlochVector(ri), BlochVector(rf), n);
    Complex direct = weak_value(PrePostSelection::trivial(
                                    state_from_bloch(BlochVector(ri)),
                                    state_from_bloch(BlochVector(rf))),
                                pauli_dot(n))
                         .value;
    CHECK(std::abs(closed - direct) < 1e-10);
  }
}

TEST_CASE("qubit probe shift geometry") {
  const double g = 1e-3;
  BlochVector ri(kX), rf((kX + kZ).normalized());

  // q = v = m kills both brackets: shift is O(g^2).
  QubitShiftResult parallel = qubit_probe_shift(ri, rf, BlochVector(kZ), kZ, kZ,
                                                pauli_dot(kX), g);
  CHECK(parallel.re_coeff == doctest::Approx(0.0));
  CHECK(parallel.im_coeff == doctest::Approx(0.0));
  CHECK(std::abs(parallel.exact) < 50.0 * g * g);

  // q perp v with m = q x v isolates the real part with coefficient 2 g.
  QubitShiftResult re_iso = qubit_probe_shift(ri, rf, BlochVector(kX.cross(kZ)),
                                              kZ, kX, pauli_dot(kY), g);
  CHECK(re_iso.re_coeff == doctest::Approx(2.0 * g));
  CHECK(re_iso.im_coeff == doctest::Approx(0.0));

  // q = v with m perp v isolates the imaginary part with coefficient 2 g.
  QubitShiftResult im_iso =
      qubit_probe_shift(ri, rf, BlochVector(kX), kZ, kZ, pauli_dot(kY), g);
  CHECK(im_iso.re_coeff == doctest::Approx(0.0));
  CHECK(im_iso.im_coeff == doctest::Approx(2.0 * g));
}

TEST_CASE("qubit probe shift formula is first order accurate") {
  Rng rng(167);
  for (int trial = 0; trial < 10; ++trial) {
    Eigen::Vector3d ri(rng.gaussian(), rng.gaussian(), rng.gaussian());
    Eigen::Vector3d rf(rng.gaussian(), rng.gaussian(), rng.gaussian());
    Eigen::Vector3d m(rng.gaussian(), rng.gaussian(), rng.gaussian());
    Eigen::Vector3d v(rng.gaussian(), rng.gaussian(), rng.gaussian());
    Eigen::Vector3d q(rng.gaussian(), rng.gaussian(), rng.gaussian());
    ri.normalize();
    rf.normalize();
    m.normalize();
    v.normalize();
    q.normalize();
    if (1.0 + ri.dot(rf) < 0.2) continue;
    double prev_ratio = 0;
    for (double g : {1e-2, 1e-3, 1e-4}) {
      QubitShiftResult r = qubit_probe_shift(BlochVector(ri), BlochVector(rf),
                                             BlochVector(m), v, q, pauli_z(), g);
      const double ratio = std::abs(r.exact - r.formula) / (g * g);
      CHECK(ratio < 100.0);
      prev_ratio = ratio;
    }
    (void)prev_ratio;
  }
}

TEST_CASE("mixed probe Bloch vectors are supported") {
  BlochVector mixed(Eigen::Vector3d(0.2, 0.1, 0.3));
  QubitShiftResult r = qubit_probe_shift(BlochVector(kX),
                                         BlochVector((kX + kY).normalized()),
                                         mixed, kZ, kX, pauli_z(), 1e-3);
  CHECK(std::abs(r.exact - r.formula) < 1e-4);
}

TEST_CASE("cnot readout: strong limit reproduces ABL probabilities") {
  Rng rng(173);
  for (int trial = 0; trial < 50; ++trial) {
    QState pre = rng.random_state(2);
    QState post = rng.random_state(2);
    const int k = rng.uniform_int(0, 1);
    CnotReadout strong = cnot_readout(pre.amp(0), pre.amp(1), 1.0, 0.0, post, k);
    AblDistribution abl = abl_probabilities(
        PrePostSelection::trivial(pre, post), basis_projector(2, k));
    // Ascending eigenvalues: index 1 is the projector's +1 outcome.
    CHECK(std::abs(strong.prob - abl.probabilities[1]) < 1e-12);
    CHECK(std::abs(strong.prob - strong.prob_circuit) < 1e-12);
  }
}

TEST_CASE("cnot readout closed form equals the circuit") {
  Rng rng(179);
  for (int trial = 0; trial < 200; ++trial) {
    QState pre = rng.random_state(2);
    QState post = rng.random_state(2);
    const double eps = rng.uniform(-0.45, 0.45);
    const double gp = std::sqrt(0.5 + eps);
    const double ep = std::sqrt(0.5 - eps);
    const int k = rng.uniform_int(0, 1);
    CnotReadout r = cnot_readout(pre.amp(0), pre.amp(1), gp, ep, post, k);
    CHECK(std::abs(r.prob - r.prob_circuit) < 1e-12);
  }
}

TEST_CASE("cnot readout limits and guards") {
  QState zero = QState::basis(2, 0);

  // Eigenstate selection: R = 1 for every eps (readout pinned at Re w = 1).
  for (double eps : {0.1, 0.01}) {
    CnotReadout r = cnot_readout(1.0, 0.0, std::sqrt(0.5 + eps),
                                 std::sqrt(0.5 - eps), zero, 0);
    CHECK(r.r == doctest::Approx(1.0).epsilon(1e-12));
  }

  // Symmetric probe: probability well defined, R is not.
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  CHECK(cnot_outcome_probability(1.0, 0.0, inv_sqrt2, inv_sqrt2, zero, 0) ==
        doctest::Approx(0.5));
  CHECK_THROWS_AS(
      cnot_readout(1.0, 0.0, inv_sqrt2, inv_sqrt2, zero, 0), SimError);
  try {
    cnot_readout(1.0, 0.0, inv_sqrt2, inv_sqrt2, zero, 0);
  } catch (const SimError& e) {
    CHECK(e.guard() == Guard::GammaEqualsEta);
  }

  // Unnormalized inputs are rejected.
  CHECK_THROWS_AS(cnot_readout(1.0, 1.0, 1.0, 0.0, zero, 0), SimError);
}

TEST_CASE("cnot weak value estimate") {
  const std::vector<double> eps_list{-0.02, -0.01, -0.005, 0.005, 0.01, 0.02};

  // Eigenstate: R(eps) = 1 identically, slope 0.
  CnotEstimate eigen =
      cnot_weak_value_estimate(QState::basis(2, 0), QState::basis(2, 0), 0,
                               eps_list);
  CHECK(eigen.re_estimate == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(eigen.eps_slope) < 1e-9);
  CHECK(eigen.slope_prediction == doctest::Approx(0.0));

  // Post orthogonal to branch k: weak value 0.
  CnotEstimate null_branch =
      cnot_weak_value_estimate(plus_state(), QState::basis(2, 1), 0, eps_list);
  CHECK(std::abs(null_branch.weak_val) < 1e-12);
  CHECK(std::abs(null_branch.re_estimate) < 1e-9);
  CHECK(std::abs(null_branch.eps_slope) < 1e-8);

  // Random selections recover the ground truth.
  Rng rng(181);
  for (int trial = 0; trial < 20; ++trial) {
    QState pre = rng.random_state(2);
    QState post = rng.random_state(2);
    if (std::abs(inner(post, pre)) < 0.2) continue;
    const int k = rng.uniform_int(0, 1);
    CnotEstimate est = cnot_weak_value_estimate(pre, post, k, eps_list);
    CHECK(std::abs(est.re_estimate - est.weak_val.real()) < 1e-6);
    CHECK(std::abs(est.eps_slope - est.slope_prediction) < 1e-6);
  }

  CHECK_THROWS_AS(
      cnot_weak_value_estimate(plus_state(), plus_state(), 0, {0.1, -0.1}),
      SimError);
}
