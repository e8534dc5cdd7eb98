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
#include "wvsim/weak_values.hpp"

using namespace wvsim;
using namespace wvsim::testing;

TEST_CASE("weak value of the identity is 1") {
  Rng rng(21);
  for (int trial = 0; trial < 5; ++trial) {
    const int dim = rng.uniform_int(2, 6);
    PrePostSelection sel(rng.random_state(dim), rng.random_state(dim),
                         rng.random_unitary(dim), rng.random_unitary(dim));
    if (std::abs(sel.overlap()) < 0.05) continue;
    WeakValue w = weak_value(sel, QOperator::identity(dim));
    CHECK(std::abs(w.value - Complex(1, 0)) < 1e-12);
    CHECK(std::abs(w.overlap - sel.overlap()) < 1e-14);
  }
}

TEST_CASE("nearly orthogonal selections amplify sigma_z up to 100") {
  // cos(2 theta) = 0.01 gives <sigma_z>_w = 1 / 0.01 = 100.
  PrePostSelection sel = amplification_selection(0.01);
  WeakValue w = weak_value(sel, pauli_z());
  CHECK(std::abs(w.value - Complex(100.0, 0.0)) < 1e-9);
  CHECK(std::abs(w.overlap - Complex(0.01, 0.0)) < 1e-12);

  // Generic angle: 1 / cos(2 theta).
  PrePostSelection gentle = amplification_selection(0.6);
  CHECK(std::abs(weak_value(gentle, pauli_z()).value - Complex(1.0 / 0.6, 0.0)) <
        1e-12);
}

TEST_CASE("overlap floor raises instead of silently diverging") {
  PrePostSelection sel = amplification_selection(1e-10);
  CHECK_THROWS_AS(weak_value(sel, pauli_z()), SimError);
  try {
    weak_value(sel, pauli_z());
  } catch (const SimError& e) {
    CHECK(e.guard() == Guard::NearOrthogonalSelection);
  }
  // Lowering the floor opts in.
  CHECK(std::abs(weak_value(sel, pauli_z(), 1e-12).value.real() / 1e10 - 1.0) < 1e-5);
}

TEST_CASE("box-paradox weak values, literal states") {
  PrePostSelection sel = three_box_literal();
  CHECK(std::abs(weak_value(sel, basis_projector(3, 0)).value - Complex(1, 0)) <
        1e-12);
  CHECK(std::abs(weak_value(sel, basis_projector(3, 1)).value - Complex(1, 0)) <
        1e-12);
  CHECK(std::abs(weak_value(sel, basis_projector(3, 2)).value - Complex(-1, 0)) <
        1e-12);
}

TEST_CASE("box-paradox weak values, preset labeling") {
  PrePostSelection sel = three_box_preset();
  CHECK(std::abs(weak_value(sel, basis_projector(3, 0)).value - Complex(1, 0)) <
        1e-12);
  CHECK(std::abs(weak_value(sel, basis_projector(3, 1)).value - Complex(-1, 0)) <
        1e-12);
  CHECK(std::abs(weak_value(sel, basis_projector(3, 2)).value - Complex(1, 0)) <
        1e-12);
}

TEST_CASE("expectation decomposition") {
  CHECK(std::abs(expectation_via_weak_values(QState::basis(3, 1),
                                             QOperator::identity(3),
                                             computational_basis(3)) -
                 Complex(1, 0)) < 1e-12);

  CHECK(std::abs(expectation_via_weak_values(plus_state(), pauli_z(),
                                             computational_basis(2))) < 1e-12);

  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = rng.uniform_int(2, 8);
    QState psi = rng.random_state(dim);
    QOperator a = rng.random_hermitian(dim);
    Complex direct = psi.amps().dot(a.matrix() * psi.amps());
    CHECK(std::abs(expectation_via_weak_values(psi, a, computational_basis(dim)) -
                   direct) < 1e-10);
  }

  std::vector<QState> incomplete{QState::basis(2, 0)};
  CHECK_THROWS_AS(
      expectation_via_weak_values(plus_state(), pauli_z(), incomplete), SimError);
}

TEST_CASE("variance decomposition") {
  CHECK(std::abs(variance_via_weak_values(plus_state(), QOperator::identity(2),
                                          computational_basis(2))) < 1e-12);

  // |0> with sigma_x: the phi = |1> term has vanishing overlap but carries
  // the whole second moment.
  CHECK(std::abs(variance_via_weak_values(QState::basis(2, 0), pauli_x(),
                                          computational_basis(2)) -
                 Complex(1, 0)) < 1e-12);

  Rng rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = rng.uniform_int(2, 8);
    QState psi = rng.random_state(dim);
    QOperator a = rng.random_hermitian(dim);
    Complex mean = psi.amps().dot(a.matrix() * psi.amps());
    Complex second = psi.amps().dot(a.matrix() * (a.matrix() * psi.amps()));
    CHECK(std::abs(variance_via_weak_values(psi, a, computational_basis(dim)) -
                   (second - mean * mean)) < 1e-9);
  }
}

TEST_CASE("bayes decomposition") {
  Rng rng(37);
  QState psi = rng.random_state(5);
  CHECK(bayes_decomposition(psi, psi, computational_basis(5)) ==
        doctest::Approx(1.0).epsilon(1e-12));

  CHECK(bayes_decomposition(QState::basis(2, 0), QState::basis(2, 1),
                            computational_basis(2)) ==
        doctest::Approx(0.0).epsilon(1e-14));

  for (int trial = 0; trial < 20; ++trial) {
    QState a = rng.random_state(5);
    QState b = rng.random_state(5);
    CHECK(std::abs(bayes_decomposition(b, a, computational_basis(5)) -
                   std::norm(inner(a, b))) < 1e-10);
  }
}

TEST_CASE("completeness sum is one") {
  Rng rng(41);
  PrePostSelection qubit_sel(rng.random_state(2), rng.random_state(2),
                             QOperator::identity(2), QOperator::identity(2));
  CHECK(std::abs(completeness_sum(qubit_sel, computational_basis(2)) -
                 Complex(1, 0)) < 1e-10);

  // Box paradox: the three projector weak values 1, 1, -1 sum to 1.
  CHECK(std::abs(completeness_sum(three_box_literal(), computational_basis(3)) -
                 Complex(1, 0)) < 1e-12);

  PrePostSelection big(rng.random_state(7), rng.random_state(7),
                       rng.random_unitary(7), rng.random_unitary(7));
  CHECK(std::abs(completeness_sum(big, computational_basis(7)) - Complex(1, 0)) <
        1e-10);
}

TEST_CASE("geometric phase") {
  QState zero = QState::basis(2, 0);
  CHECK(geometric_phase(zero, zero, zero) == doctest::Approx(0.0));

  Vector third(2);
  third << 1.0, Complex(0.0, 1.0);
  QState psi3(third);
  const double phase = geometric_phase(zero, plus_state(), psi3);
  CHECK(phase == doctest::Approx(0.7853981633974483).epsilon(1e-12));

  // Gauge invariance and antisymmetry.
  Rng rng(43);
  auto rephase = [&](const QState& s) {
    return QState(std::exp(Complex(0, rng.uniform(0, 6.28))) * s.amps());
  };
  CHECK(std::abs(geometric_phase(rephase(zero), rephase(plus_state()),
                                 rephase(psi3)) -
                 phase) < 1e-12);
  CHECK(geometric_phase(psi3, plus_state(), zero) ==
        doctest::Approx(-phase).epsilon(1e-12));

  CHECK_THROWS_AS(geometric_phase(zero, QState::basis(2, 1), psi3), SimError);
}

TEST_CASE("weak values are linear in the observable") {
  Rng rng(47);
  for (int trial = 0; trial < 20; ++trial) {
    const int dim = rng.uniform_int(2, 6);
    PrePostSelection sel(rng.random_state(dim), rng.random_state(dim),
                         rng.random_unitary(dim), rng.random_unitary(dim));
    if (std::abs(sel.overlap()) < 0.05) continue;
    QOperator a = rng.random_hermitian(dim);
    QOperator b = rng.random_hermitian(dim);
    Complex alpha(rng.gaussian(), rng.gaussian());
    Complex beta(rng.gaussian(), rng.gaussian());
    Complex lhs = weak_value(sel, QOperator::general(alpha * a.matrix() +
                                                     beta * b.matrix()))
                      .value;
    Complex rhs =
        alpha * weak_value(sel, a).value + beta * weak_value(sel, b).value;
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("expectation decomposition is basis independent") {
  Rng rng(53);
  QState psi = rng.random_state(4);
  QOperator a = rng.random_hermitian(4);
  std::vector<QState> basis1, basis2;
  QOperator u1 = rng.random_unitary(4);
  QOperator u2 = rng.random_unitary(4);
  for (int k = 0; k < 4; ++k) {
    basis1.push_back(QState(u1.matrix().col(k)));
    basis2.push_back(QState(u2.matrix().col(k)));
  }
  CHECK(std::abs(expectation_via_weak_values(psi, a, basis1) -
                 expectation_via_weak_values(psi, a, basis2)) < 1e-9);
}
