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

#include "wvsim/protective.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace wvsim {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

double momentum_of_bin(int k, int n, double dx) {
  const double dp = 2.0 * kPi / (n * dx);
  return (k < n / 2) ? k * dp : (k - n) * dp;
}

Eigen::SelfAdjointEigenSolver<Matrix> solve_hermitian(const Matrix& h,
                                                      double min_gap) {
  if (max_abs(h - h.adjoint()) > kConstructTol) {
    throw SimError(Guard::NonHermitian, "h_s(t) must stay hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  const Eigen::VectorXd& ev = solver.eigenvalues();
  for (Eigen::Index k = 1; k < ev.size(); ++k) {
    if (ev(k) - ev(k - 1) <= min_gap) {
      throw SimError(Guard::SpectralGapViolation,
                     "h_s(t) spectral gap " + std::to_string(ev(k) - ev(k - 1)) +
                         " at or below minimum " + std::to_string(min_gap));
    }
  }
  return solver;
}

}  // namespace

ProtectiveResult protective_measurement(
    const std::function<Matrix(double)>& h_s,
    const std::function<double(double)>& g_profile, const ProbeGrid& xi,
    const QOperator& a, double total_time, int eigenstate_index, int n_steps,
    const ProtectiveOptions& options) {
  if (n_steps < options.min_steps) {
    throw SimError(Guard::InsufficientSteps,
                   "n_steps below configured minimum " +
                       std::to_string(options.min_steps));
  }
  if (!(total_time > 0)) {
    throw SimError(Guard::InvalidArgument, "total_time must be positive");
  }
  const int d = a.dim();
  const int n = xi.n_points();
  Eigensystem a_eig = eigendecompose_hermitian(a);

  const Matrix h0 = h_s(0.0);
  require_same_dim(static_cast<int>(h0.rows()), d, "h_s vs observable");
  Eigen::SelfAdjointEigenSolver<Matrix> init = solve_hermitian(h0, options.min_gap);
  if (eigenstate_index < 0 || eigenstate_index >= d) {
    throw SimError(Guard::InvalidArgument, "eigenstate index out of range");
  }

  // State layout: target components in the A eigenbasis, probe in momentum
  // representation. Both the coupling and the kinetic term are diagonal
  // there; h_s mixes target components only, so the probe representation
  // never has to change unless a position potential is present.
  Eigen::FFT<double> fft;
  std::vector<Complex> buf_in(xi.amps().data(), xi.amps().data() + n);
  std::vector<Complex> buf_out;
  fft.fwd(buf_out, buf_in);

  const Vector target0 = a_eig.eigenvectors.adjoint() * init.eigenvectors().col(eigenstate_index);
  Matrix state(d, n);
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < n; ++k) state(j, k) = target0(j) * buf_out[k];
  }

  std::vector<double> momenta(n);
  for (int k = 0; k < n; ++k) momenta[k] = momentum_of_bin(k, n, xi.dx());

  const double dt = total_time / n_steps;
  const bool has_potential = xi.potential().has_value();

  for (int step = 0; step < n_steps; ++step) {
    const double t_mid = (step + 0.5) * dt;
    const double g = g_profile(t_mid);

    // exp(-i dt (P^2/2m + g a_j P)) on each branch.
    for (int j = 0; j < d; ++j) {
      const double aj = a_eig.eigenvalues(j);
      for (int k = 0; k < n; ++k) {
        const double p = momenta[k];
        const double phase = dt * (p * p / (2.0 * xi.mass()) + g * aj * p);
        state(j, k) *= std::exp(Complex(0.0, -phase));
      }
    }

    if (has_potential) {
      const Eigen::VectorXd& v = *xi.potential();
      for (int j = 0; j < d; ++j) {
        for (int k = 0; k < n; ++k) buf_out[k] = state(j, k);
        fft.inv(buf_in, buf_out);
        for (int k = 0; k < n; ++k) {
          buf_in[k] *= std::exp(Complex(0.0, -dt * v(k)));
        }
        fft.fwd(buf_out, buf_in);
        for (int k = 0; k < n; ++k) state(j, k) = buf_out[k];
      }
    }

    // exp(-i dt h_s(t)) on the target factor.
    Eigen::SelfAdjointEigenSolver<Matrix> hs = solve_hermitian(h_s(t_mid), options.min_gap);
    Vector phases(d);
    for (int j = 0; j < d; ++j) {
      phases(j) = std::exp(Complex(0.0, -dt * hs.eigenvalues()(j)));
    }
    const Matrix u_target = a_eig.eigenvectors.adjoint() * hs.eigenvectors() *
                            phases.asDiagonal() * hs.eigenvectors().adjoint() *
                            a_eig.eigenvectors;
    state = u_target * state;
  }

  // Moments of the reduced probe, position representation per branch.
  const double momentum_weight = xi.dx() / n;
  double mean_q = 0.0;
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < n; ++k) buf_out[k] = state(j, k);
    fft.inv(buf_in, buf_out);
    for (int k = 0; k < n; ++k) {
      mean_q += std::norm(buf_in[k]) * xi.dx() * xi.x(k);
    }
  }
  const double initial_mean_q = probe_moments(xi).mean_q;

  // Fidelity against the instantaneous eigenstate at the final time.
  Eigen::SelfAdjointEigenSolver<Matrix> fin =
      solve_hermitian(h_s(total_time), options.min_gap);
  const Vector target_final =
      a_eig.eigenvectors.adjoint() * fin.eigenvectors().col(eigenstate_index);
  double fidelity = 0.0;
  for (int k = 0; k < n; ++k) {
    Complex amp = 0.0;
    for (int j = 0; j < d; ++j) amp += std::conj(target_final(j)) * state(j, k);
    fidelity += std::norm(amp) * momentum_weight;
  }

  ProtectiveResult out;
  out.dq = mean_q - initial_mean_q;
  out.target_fidelity = fidelity;
  return out;
}

}  // namespace wvsim
