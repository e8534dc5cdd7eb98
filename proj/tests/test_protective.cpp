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

#include <cmath>

#include "oracles.hpp"
#include "wvsim/protective.hpp"
#include "wvsim/qubit.hpp"

using namespace wvsim;
using namespace wvsim::testing;

namespace {

// Constant-gap qubit Hamiltonian whose eigenbasis rotates by theta_max over
// [0, T]: H(t) = e0 (cos(w t) sigma_z + sin(w t) sigma_x).
std::function<Matrix(double)> rotating_qubit(double e0, double omega) {
  return [e0, omega](double t) {
    Matrix h(2, 2);
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    h << e0 * c, e0 * s, e0 * s, -e0 * c;
    return h;
  };
}

}  // namespace

TEST_CASE("commuting protective measurement is exact") {
  // H_s = sigma_z and A = sigma_z commute; start in the excited state |0>.
  auto h_s = [](double) { return pauli_z().matrix(); };
  auto g_profile = [](double) { return 0.05; };  // g0 = 0.05 * T
  const double total_time = 2.0;
  ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0, 0.0, 50.0));
  ProtectiveResult res = protective_measurement(h_s, g_profile, xi, pauli_z(),
                                                total_time,
                                                /*eigenstate_index=*/1, 2000);
  // g0 = 0.1, <A> = +1 in the upper eigenstate.
  CHECK(std::abs(res.dq - 0.1) < 1e-10);
  CHECK(res.target_fidelity == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("adiabatic rotating sweep tracks the quadrature prediction") {
  const double e0 = 1.0, total_time = 40.0;
  const double omega = (3.141592653589793 / 2.0) / total_time;  // quarter turn
  auto h_s = rotating_qubit(e0, omega);
  const double g0 = 0.1;
  auto g_profile = [&](double) { return g0 / total_time; };
  ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0, 0.0, 100.0));

  ProtectiveResult res = protective_measurement(h_s, g_profile, xi, pauli_z(),
                                                total_time,
                                                /*eigenstate_index=*/1, 4000);

  // Instantaneous <sigma_z> in the upper eigenstate is cos(omega t).
  const double predicted = simpson(
      [&](double t) { return (g0 / total_time) * std::cos(omega * t); }, 0.0,
      total_time, 2000);
  CHECK(res.target_fidelity >= 0.999);
  CHECK(std::abs(res.dq - predicted) <= 0.02 * std::abs(predicted));
}

TEST_CASE("diabatic sweep reports degraded fidelity instead of hiding it") {
  const double e0 = 0.35, total_time = 0.5;
  const double omega = 3.141592653589793;  // quarter turn, fast vs the gap
  ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0, 0.0, 100.0));
  ProtectiveResult res = protective_measurement(rotating_qubit(e0, omega),
                                                [](double) { return 0.01; }, xi,
                                                pauli_z(), total_time, 1, 800);
  CHECK(res.target_fidelity < 0.99);
}

TEST_CASE("protective guards") {
  ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0, 0.0, 100.0));
  auto h_s = rotating_qubit(1.0, 0.01);
  auto flat_g = [](double) { return 0.01; };

  CHECK_THROWS_AS(protective_measurement(h_s, flat_g, xi, pauli_z(), 1.0, 1, 4),
                  SimError);

  // Gap collapses at t = 0.5.
  auto crossing = [](double t) {
    Matrix h(2, 2);
    h << (0.5 - t), 0.0, 0.0, (t - 0.5);
    return h;
  };
  ProtectiveOptions strict;
  strict.min_gap = 0.01;
  CHECK_THROWS_AS(
      protective_measurement(crossing, flat_g, xi, pauli_z(), 1.0, 0, 256, strict),
      SimError);
  try {
    protective_measurement(crossing, flat_g, xi, pauli_z(), 1.0, 0, 256, strict);
  } catch (const SimError& e) {
    CHECK(e.guard() == Guard::SpectralGapViolation);
  }
}
