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
#include "wvsim/decoherence.hpp"
#include "wvsim/qubit.hpp"

using namespace wvsim;
using namespace wvsim::testing;

namespace {

EnvironmentModel dephasing_model(double coupling) {
  // h1 = coupling * sigma_z (x) sigma_x: diagonal in the target z basis.
  Matrix h1 = coupling * kron(pauli_z().matrix(), pauli_x().matrix());
  return EnvironmentModel(QOperator::hermitian(0.5 * pauli_z().matrix()),
                          QOperator::hermitian(std::move(h1)),
                          QState::basis(2, 0), QState::basis(2, 0),
                          computational_basis(2), 0.0, 0.7, 1.5);
}

}  // namespace

TEST_CASE("time-ordered exponential: constant generator") {
  Rng rng(191);
  QOperator h = rng.random_hermitian(3);
  auto gen = [&](double) { return h.matrix(); };
  QOperator sliced = time_ordered_exponential(gen, 0.0, 1.3, 64);
  QOperator direct = matrix_exponential(h, Complex(0, -1.3));
  CHECK(max_abs(sliced.matrix() - direct.matrix()) < 1e-12);
}

TEST_CASE("time-ordered exponential: time-dependent generator converges") {
  // H(t) = sigma_z + t sigma_x; reference from very fine slicing.
  auto gen = [](double t) {
    return Matrix(pauli_z().matrix() + t * pauli_x().matrix());
  };
  QOperator coarse = time_ordered_exponential(gen, 0.0, 1.0, 128);
  QOperator fine = time_ordered_exponential(gen, 0.0, 1.0, 2048);
  CHECK(max_abs(coarse.matrix() - fine.matrix()) < 1e-9);
  CHECK(max_abs(coarse.matrix().adjoint() * coarse.matrix() -
                Matrix::Identity(2, 2)) < 1e-13);
}

TEST_CASE("dressed propagators match the closed form for constant H") {
  Rng rng(193);
  for (int trial = 0; trial < 3; ++trial) {
    EnvironmentModel env(rng.random_hermitian(2),
                         QOperator::hermitian(0.8 * rng.random_hermitian(4).matrix()),
                         rng.random_state(2), rng.random_state(2),
                         computational_basis(2), 0.0, 0.7, 1.5);
    DressedPropagators props = dressed_propagators(env);
    Matrix h_total = kron(env.h0.matrix(), Matrix::Identity(2, 2)) +
                     env.h1.matrix();
    Matrix u_exact = matrix_exponential(QOperator::hermitian(h_total),
                                        Complex(0, -(env.t_0 - env.t_i)))
                         .matrix();
    Matrix v_exact = matrix_exponential(QOperator::hermitian(h_total),
                                        Complex(0, -(env.t_f - env.t_0)))
                         .matrix();
    CHECK(max_abs(props.u_full.matrix() - u_exact) < 1e-10);
    CHECK(max_abs(props.v_full.matrix() - v_exact) < 1e-10);
  }
}

TEST_CASE("dressed channel: decoupled environment leaves one branch pair") {
  EnvironmentModel env(QOperator::hermitian(0.4 * pauli_z().matrix()),
                       QOperator::hermitian(Matrix::Zero(4, 4)),
                       QState::basis(2, 0), QState::basis(2, 0),
                       computational_basis(2), 0.0, 0.5, 1.0);
  Channel ch = dressed_channel(env);
  REQUIRE(ch.size() == 1);
  // E is the free target propagator over [t_i, t_0].
  Matrix u0 = matrix_exponential(QOperator::hermitian(0.4 * pauli_z().matrix()),
                                 Complex(0, -0.5))
                  .matrix();
  CHECK(max_abs(ch.kraus_e()[0] - u0) < 1e-10);
}

TEST_CASE("dressed channel normalizations and S-matrix identity") {
  EnvironmentModel env = dephasing_model(0.9);
  Channel ch = dressed_channel(env);
  Matrix sum_e = Matrix::Zero(2, 2);
  Matrix sum_f = Matrix::Zero(2, 2);
  for (const Matrix& e : ch.kraus_e()) sum_e += e.adjoint() * e;
  for (const Matrix& f : ch.kraus_f()) sum_f += f.adjoint() * f;
  CHECK(max_abs(sum_e - Matrix::Identity(2, 2)) < 1e-8);
  CHECK(max_abs(sum_f - Matrix::Identity(2, 2)) < 1e-8);

  Matrix h_total =
      kron(env.h0.matrix(), Matrix::Identity(2, 2)) + env.h1.matrix();
  QOperator u_exact = matrix_exponential(QOperator::hermitian(h_total),
                                         Complex(0, -(env.t_0 - env.t_i)));
  QOperator v_exact = matrix_exponential(QOperator::hermitian(h_total),
                                         Complex(0, -(env.t_f - env.t_0)));
  CHECK(s_matrix_identity_check(ch, u_exact, v_exact, env.env_init,
                                env.env_final) < 1e-8);
}

TEST_CASE("slicing non-convergence guard") {
  Rng rng(197);
  EnvironmentModel env(rng.random_hermitian(2),
                       QOperator::hermitian(60.0 * rng.random_hermitian(4).matrix()),
                       rng.random_state(2), rng.random_state(2),
                       computational_basis(2), 0.0, 1.0, 2.0);
  SlicingOptions coarse;
  coarse.slices = 2;
  CHECK_THROWS_AS(dressed_propagators(env, coarse), SimError);
  try {
    dressed_propagators(env, coarse);
  } catch (const SimError& e) {
    CHECK(e.guard() == Guard::SlicingNonConvergence);
  }
}

TEST_CASE("h1 = 0 reduces to the plain weak value with free evolutions") {
  Rng rng(199);
  QOperator h0 = rng.random_hermitian(2);
  QState e_i = rng.random_state(2);
  EnvironmentModel env(h0, QOperator::hermitian(Matrix::Zero(4, 4)), e_i, e_i,
                       computational_basis(2), 0.0, 0.6, 1.3);
  for (int trial = 0; trial < 5; ++trial) {
    QState pre = rng.random_state(2);
    QState post = rng.random_state(2);
    QOperator a = rng.random_hermitian(2);
    QOperator u0 = matrix_exponential(h0, Complex(0, -0.6));
    QOperator v0 = matrix_exponential(h0, Complex(0, -0.7));
    PrePostSelection plain(pre, post, u0, v0);
    if (std::abs(plain.overlap()) < 0.05) continue;
    CHECK(std::abs(decoherent_weak_value(env, pre, post, a) -
                   weak_value(plain, a).value) < 1e-10);

    // Tr E(W) reduces to the free-evolution overlap <f|V0 U0|i>.
    const Channel ch = dressed_channel(env);
    const WOperator w(pre.amps() * post.amps().adjoint());
    CHECK(std::abs(apply_to_w(ch, w).trace() - plain.overlap()) < 1e-10);
  }
}

TEST_CASE("branch-selective dephasing drives the weak value real") {
  // Coupling P0 (x) sigma_x rotates the environment only on the target |0>
  // branch: the evolved two-state operator picks up cos(lambda T) on that
  // branch, so <P0>_E(W) = c W00 / (c W00 + W11) with c = cos(lambda T).
  Vector pre_a(2), post_a(2);
  pre_a << 1.0, 1.0;
  post_a << 1.0, Complex(0.3, 0.4);
  QState pre(pre_a), post(post_a);
  Matrix proj0 = Matrix::Zero(2, 2);
  proj0(0, 0) = 1.0;
  QOperator a = QOperator::projector(proj0);
  const Complex w00 = pre.amp(0) * std::conj(post.amp(0));
  const Complex w11 = pre.amp(1) * std::conj(post.amp(1));
  const double span = 1.5;  // t_f - t_i

  for (double lam_t : {0.3, 0.8, 1.2}) {
    Matrix h1 = (lam_t / span) * kron(proj0, pauli_x().matrix());
    EnvironmentModel env(QOperator::hermitian(Matrix::Zero(2, 2)),
                         QOperator::hermitian(std::move(h1)), QState::basis(2, 0),
                         QState::basis(2, 0), computational_basis(2), 0.0, 0.7,
                         1.5);
    const Complex got = decoherent_weak_value(env, pre, post, a);
    const Complex expected =
        std::cos(lam_t) * w00 / (std::cos(lam_t) * w00 + w11);
    CHECK(std::abs(got - expected) < 1e-10);
  }

  // Full suppression of the coherent branch: only the a = 0 branch survives
  // and the weak value collapses to that (real) eigenvalue.
  Matrix h1 = (1.5707963267948966 / span) * kron(proj0, pauli_x().matrix());
  EnvironmentModel env(QOperator::hermitian(Matrix::Zero(2, 2)),
                       QOperator::hermitian(std::move(h1)), QState::basis(2, 0),
                       QState::basis(2, 0), computational_basis(2), 0.0, 0.7,
                       1.5);
  const Complex collapsed = decoherent_weak_value(env, pre, post, a);
  CHECK(std::abs(collapsed) < 1e-10);
}

TEST_CASE("identity observable has weak value 1 under any environment") {
  Rng rng(211);
  EnvironmentModel env = dephasing_model(0.7);
  for (int trial = 0; trial < 5; ++trial) {
    QState pre = rng.random_state(2);
    QState post = rng.random_state(2);
    try {
      CHECK(std::abs(decoherent_weak_value(env, pre, post,
                                           QOperator::identity(2)) -
                     Complex(1, 0)) < 1e-10);
    } catch (const SimError& e) {
      CHECK(e.guard() == Guard::NearOrthogonalSelection);
    }
  }
}

TEST_CASE("decoherent weak value is invariant under basis rephasing") {
  Rng rng(223);
  EnvironmentModel env = dephasing_model(0.8);
  QState pre = rng.random_state(2);
  QState post = rng.random_state(2);
  QOperator a = pauli_x();
  Complex base = decoherent_weak_value(env, pre, post, a);
  std::vector<QState> rephased;
  for (const QState& em : env.env_basis) {
    rephased.push_back(
        QState(std::exp(Complex(0, rng.uniform(0, 6.28))) * em.amps()));
  }
  EnvironmentModel env2(env.h0, env.h1, env.env_init, env.env_final, rephased,
                        env.t_i, env.t_0, env.t_f);
  CHECK(std::abs(decoherent_weak_value(env2, pre, post, a) - base) < 1e-12);
}

TEST_CASE("decoherent probe shifts: h1 = 0 reduction and residual order") {
  // Reduction: with h1 = 0 and e_f = e_i the shifts equal the plain
  // weak-measurement shifts for the free-evolved selection.
  Rng rng(227);
  QOperator h0 = rng.random_hermitian(2);
  QState e_i = rng.random_state(2);
  EnvironmentModel trivial_env(h0, QOperator::hermitian(Matrix::Zero(4, 4)), e_i,
                               e_i, computational_basis(2), 0.0, 0.6, 1.3);
  ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0));
  QState pre = rng.random_state(2);
  QState post = rng.random_state(2);
  const double g = 1e-3;
  DecoherentShifts shifts =
      decoherent_probe_shifts(trivial_env, pre, post, pauli_z(), xi, g);

  QOperator u0 = matrix_exponential(h0, Complex(0, -0.6));
  QOperator v0 = matrix_exponential(h0, Complex(0, -0.7));
  PrePostSelection plain(pre, post, u0, v0);
  ProbeShifts direct =
      first_order_shifts(weak_value(plain, pauli_z()).value, xi, g);
  CHECK(std::abs(shifts.dq - direct.dq) < 1e-10);
  CHECK(std::abs(shifts.dp - direct.dp) < 1e-10);

  // And the oracle agrees with the plain exact simulation.
  VonNeumannResult exact = exact_von_neumann(plain, pauli_z(), xi, g);
  ProbeShifts oracle_direct = measured_shifts(xi, exact.probe);
  CHECK(std::abs(shifts.oracle_dq - oracle_direct.dq) < 1e-10);
  CHECK(std::abs(shifts.oracle_dp - oracle_direct.dp) < 1e-10);

  // Dephasing model: formula vs oracle residual shrinks like g^2.
  EnvironmentModel env = dephasing_model(0.8);
  QState pre2 = plus_state();
  Vector post_amp(2);
  post_amp << 1.0, Complex(0.3, 0.4);
  QState post2(post_amp);
  std::vector<double> gs, eq, ep;
  for (double gg : {3e-3, 1e-3, 3e-4}) {
    DecoherentShifts s =
        decoherent_probe_shifts(env, pre2, post2, pauli_z(), xi, gg);
    gs.push_back(gg);
    eq.push_back(std::abs(s.dq - s.oracle_dq));
    ep.push_back(std::abs(s.dp - s.oracle_dp));
  }
  CHECK(fit_log_order(gs, eq) >= 1.9);
  CHECK(fit_log_order(gs, ep) >= 1.9);
}

TEST_CASE("environment-averaged weak value reduces correctly when decoupled") {
  Rng rng(229);
  QOperator h0 = rng.random_hermitian(2);
  EnvironmentModel env(h0, QOperator::hermitian(Matrix::Zero(4, 4)),
                       QState::basis(2, 0), QState::basis(2, 0),
                       computational_basis(2), 0.0, 0.6, 1.3);
  QState pre = rng.random_state(2);
  QState post = rng.random_state(2);
  QOperator a = rng.random_hermitian(2);
  Complex averaged = decoherent_weak_value_env_averaged(env, pre, post, a);
  Complex plain = decoherent_weak_value(env, pre, post, a);
  CHECK(std::abs(averaged - plain) < 1e-10);
}

TEST_CASE("environment model validation") {
  CHECK_THROWS_AS(EnvironmentModel(QOperator::hermitian(pauli_z().matrix()),
                                   QOperator::hermitian(Matrix::Zero(4, 4)),
                                   QState::basis(2, 0), QState::basis(2, 0),
                                   computational_basis(2), 1.0, 0.5, 2.0),
                  SimError);
  std::vector<QState> incomplete{QState::basis(2, 0)};
  CHECK_THROWS_AS(EnvironmentModel(QOperator::hermitian(pauli_z().matrix()),
                                   QOperator::hermitian(Matrix::Zero(4, 4)),
                                   QState::basis(2, 0), QState::basis(2, 0),
                                   incomplete, 0.0, 0.5, 2.0),
                  SimError);
}
