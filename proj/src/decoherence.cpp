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

#include "wvsim/decoherence.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

namespace wvsim {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kSqrt3 = 1.7320508075688772935274463415058724;

double momentum_of_bin(int k, int n, double dx) {
  const double dp = 2.0 * kPi / (n * dx);
  return (k < n / 2) ? k * dp : (k - n) * dp;
}

Matrix expm_hermitian(const Matrix& h, Complex scale) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  Vector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    phases(k) = std::exp(scale * solver.eigenvalues()(k));
  }
  return solver.eigenvectors() * phases.asDiagonal() *
         solver.eigenvectors().adjoint();
}

}  // namespace

EnvironmentModel::EnvironmentModel(QOperator h0_in, QOperator h1_in,
                                   QState env_init_in, QState env_final_in,
                                   std::vector<QState> env_basis_in, double ti,
                                   double t0, double tf)
    : h0(std::move(h0_in)),
      h1(std::move(h1_in)),
      env_init(std::move(env_init_in)),
      env_final(std::move(env_final_in)),
      env_basis(std::move(env_basis_in)),
      t_i(ti),
      t_0(t0),
      t_f(tf),
      target_dim(h0.dim()),
      env_dim(env_init.dim()) {
  if (max_abs(h0.matrix() - h0.matrix().adjoint()) > kConstructTol) {
    throw SimError(Guard::NonHermitian, "h0 must be hermitian");
  }
  if (max_abs(h1.matrix() - h1.matrix().adjoint()) > kConstructTol) {
    throw SimError(Guard::NonHermitian, "h1 must be hermitian");
  }
  require_same_dim(h1.dim(), target_dim * env_dim, "h1 on target (x) environment");
  require_same_dim(env_final.dim(), env_dim, "environment boundary states");
  require_complete_orthonormal(env_basis, env_dim);
  if (!(t_i < t_0 && t_0 < t_f)) {
    throw SimError(Guard::InvalidArgument, "times must satisfy t_i < t_0 < t_f");
  }
}

QOperator time_ordered_exponential(const std::function<Matrix(double)>& h,
                                   double t0, double t1, int slices) {
  if (slices < 1) {
    throw SimError(Guard::InvalidArgument, "need at least one slice");
  }
  if (!(t1 > t0)) {
    throw SimError(Guard::InvalidArgument, "time interval must be forward");
  }
  const double dt = (t1 - t0) / slices;
  const double c1 = 0.5 - kSqrt3 / 6.0;
  const double c2 = 0.5 + kSqrt3 / 6.0;

  Matrix total;
  for (int s = 0; s < slices; ++s) {
    const double a = t0 + s * dt;
    const Matrix h1m = h(a + c1 * dt);
    const Matrix h2m = h(a + c2 * dt);
    // Fourth-order Magnus factor: Omega = -i dt (H1 + H2)/2
    //   - (sqrt(3)/12) dt^2 [H2, H1]; exp(Omega) is exactly unitary.
    const Matrix commutator = h2m * h1m - h1m * h2m;
    const Matrix hermitian_part = 0.5 * dt * (h1m + h2m) -
                                  Complex(0.0, 1.0) * (kSqrt3 / 12.0) * dt * dt *
                                      commutator;
    // Omega = -i * hermitian_part with hermitian_part = hermitian_part^dag.
    const Matrix factor = expm_hermitian(hermitian_part, Complex(0.0, -1.0));
    if (s == 0) {
      total = factor;
    } else {
      total = factor * total;  // later slices act on the left
    }
  }
  return QOperator::unitary(std::move(total));
}

namespace {

DressedPropagators build_propagators(const EnvironmentModel& env, int slices) {
  const int ds = env.target_dim;
  const int de = env.env_dim;
  const Matrix id_e = Matrix::Identity(de, de);

  Eigen::SelfAdjointEigenSolver<Matrix> h0_eig(env.h0.matrix());
  auto free_target = [&](double duration, double sign) {
    Vector phases(ds);
    for (int k = 0; k < ds; ++k) {
      phases(k) = std::exp(Complex(0.0, sign * duration * h0_eig.eigenvalues()(k)));
    }
    return Matrix(h0_eig.eigenvectors() * phases.asDiagonal() *
                  h0_eig.eigenvectors().adjoint());
  };

  const Matrix u0 = free_target(env.t_0 - env.t_i, -1.0);
  const Matrix v0 = free_target(env.t_f - env.t_0, -1.0);

  // h0-rotated coupling; the T-ordered exponentials of these rotate the full
  // propagators into U = (U0 (x) 1) K and V = K (V0 (x) 1).
  auto rotated_fwd = [&](double s) {
    const Matrix rot = free_target(s - env.t_i, 1.0);  // exp(+i h0 (s - t_i))
    return Matrix(kron(rot, id_e) * env.h1.matrix() * kron(rot.adjoint(), id_e));
  };
  auto rotated_bwd = [&](double s) {
    const Matrix rot = free_target(env.t_f - s, -1.0);  // exp(-i h0 (t_f - s))
    return Matrix(kron(rot, id_e) * env.h1.matrix() * kron(rot.adjoint(), id_e));
  };

  const QOperator k_fwd =
      time_ordered_exponential(rotated_fwd, env.t_i, env.t_0, slices);
  const QOperator k_bwd =
      time_ordered_exponential(rotated_bwd, env.t_0, env.t_f, slices);

  DressedPropagators out{
      QOperator::unitary(kron(u0, id_e) * k_fwd.matrix()),
      QOperator::unitary(k_bwd.matrix() * kron(v0, id_e)),
      QOperator::unitary(u0),
      QOperator::unitary(v0),
  };
  return out;
}

}  // namespace

DressedPropagators dressed_propagators(const EnvironmentModel& env,
                                       const SlicingOptions& options) {
  DressedPropagators base = build_propagators(env, options.slices);
  if (options.check_doubling) {
    DressedPropagators fine = build_propagators(env, 2 * options.slices);
    const double drift =
        std::max(max_abs(base.u_full.matrix() - fine.u_full.matrix()),
                 max_abs(base.v_full.matrix() - fine.v_full.matrix()));
    if (drift > options.doubling_tol) {
      throw SimError(Guard::SlicingNonConvergence,
                     "doubling the slices moved the propagators by " +
                         std::to_string(drift));
    }
  }
  return base;
}

Channel dressed_channel(const EnvironmentModel& env, const SlicingOptions& options) {
  const DressedPropagators props = dressed_propagators(env, options);
  return channel_from_factorization(props.u_full, props.v_full, env.env_init,
                                    env.env_final, env.env_basis, env.target_dim,
                                    1e-8);
}

Complex decoherent_weak_value(const EnvironmentModel& env, const QState& pre,
                              const QState& post, const QOperator& a,
                              const SlicingOptions& options, double overlap_floor) {
  require_same_dim(pre.dim(), env.target_dim, "pre-selection vs target");
  require_same_dim(post.dim(), env.target_dim, "post-selection vs target");
  require_same_dim(a.dim(), env.target_dim, "observable vs target");
  const Channel ch = dressed_channel(env, options);
  const WOperator w(pre.amps() * post.amps().adjoint());
  const WOperator evolved = apply_to_w(ch, w);
  const Complex tr = evolved.trace();
  if (std::abs(tr) <= overlap_floor) {
    throw SimError(Guard::NearOrthogonalSelection,
                   "|Tr E(W)| vanishes after decoherence");
  }
  return (evolved.matrix() * a.matrix()).trace() / tr;
}

Complex decoherent_weak_value_env_averaged(const EnvironmentModel& env,
                                           const QState& pre, const QState& post,
                                           const QOperator& a,
                                           const SlicingOptions& options) {
  const DressedPropagators props = dressed_propagators(env, options);
  const WOperator w(pre.amps() * post.amps().adjoint());
  Complex weighted = 0.0;
  double total = 0.0;
  for (const QState& readout : env.env_basis) {
    const Channel ch = channel_from_factorization(
        props.u_full, props.v_full, env.env_init, readout, env.env_basis,
        env.target_dim, 1e-8);
    const WOperator evolved = apply_to_w(ch, w);
    const Complex tr = evolved.trace();
    const double weight = std::norm(tr);
    if (weight < 1e-28) continue;
    weighted += weight * ((evolved.matrix() * a.matrix()).trace() / tr);
    total += weight;
  }
  if (total < 1e-28) {
    throw SimError(Guard::AllPathsVanish,
                   "every environment readout branch vanishes");
  }
  return weighted / total;
}

DecoherentShifts decoherent_probe_shifts(const EnvironmentModel& env,
                                         const QState& pre, const QState& post,
                                         const QOperator& a, const ProbeGrid& xi,
                                         double g,
                                         const DecoherentShiftOptions& options) {
  DecoherentShifts out;
  out.weak_val = decoherent_weak_value(env, pre, post, a, options.slicing,
                                       options.overlap_floor);
  if (std::abs(g) * std::abs(out.weak_val) > options.max_g_weak_value) {
    throw SimError(Guard::InvalidArgument,
                   "|g <A>_E(W)| exceeds the weak-regime guard");
  }

  const ProbeMoments moments = probe_moments(xi);
  out.dq = g * out.weak_val.real() +
           xi.mass() * g * out.weak_val.imag() * moments.d_var_q_dt;
  out.dp = 2.0 * g * moments.var_p * out.weak_val.imag();

  // Tripartite oracle: exact closed-form propagators for the constant
  // Hamiltonian (independent of the sliced channel route), impulsive
  // A (x) P coupling at t_0, joint post-selection of target and environment.
  const int ds = env.target_dim;
  const int de = env.env_dim;
  if (de > 8) {
    throw SimError(Guard::DimensionLimit,
                   "tripartite oracle is capped at environment dim 8");
  }
  const int n = xi.n_points();
  const Matrix h_total =
      kron(env.h0.matrix(), Matrix::Identity(de, de)) + env.h1.matrix();
  const Matrix u1 = expm_hermitian(h_total, Complex(0.0, -(env.t_0 - env.t_i)));
  const Matrix u2 = expm_hermitian(h_total, Complex(0.0, -(env.t_f - env.t_0)));

  Eigensystem a_eig = eigendecompose_hermitian(a);
  const double window = xi.x_max() - xi.x_min();
  const double max_shift = std::abs(g) * a_eig.eigenvalues.cwiseAbs().maxCoeff();
  if (max_shift > window / 4.0) {
    throw SimError(Guard::GridWindow, "coupling shift exceeds the window guard");
  }

  Eigen::FFT<double> fft;
  std::vector<Complex> buf_pos(xi.amps().data(), xi.amps().data() + n);
  std::vector<Complex> buf_mom;
  fft.fwd(buf_mom, buf_pos);

  const Vector joint0 = kron(Matrix(pre.amps()), Matrix(env.env_init.amps()));
  const Vector joint1 = u1 * joint0;

  Matrix state(ds * de, n);
  for (int row = 0; row < ds * de; ++row) {
    for (int k = 0; k < n; ++k) state(row, k) = joint1(row) * buf_mom[k];
  }

  // Rotate the target factor into the A eigenbasis, apply the branch
  // translation phases, rotate back.
  const Matrix t_rot = kron(a_eig.eigenvectors.adjoint(), Matrix::Identity(de, de));
  state = t_rot * state;
  for (int j = 0; j < ds; ++j) {
    for (int e = 0; e < de; ++e) {
      const int row = j * de + e;
      for (int k = 0; k < n; ++k) {
        const double p = momentum_of_bin(k, n, xi.dx());
        state(row, k) *= std::exp(Complex(0.0, -g * a_eig.eigenvalues(j) * p));
      }
    }
  }
  state = t_rot.adjoint() * state;
  state = u2 * state;

  const Vector joint_final =
      kron(Matrix(post.amps()), Matrix(env.env_final.amps()));
  std::vector<Complex> probe_mom(n);
  for (int k = 0; k < n; ++k) {
    Complex amp = 0.0;
    for (int row = 0; row < ds * de; ++row) {
      amp += std::conj(joint_final(row)) * state(row, k);
    }
    probe_mom[k] = amp;
  }
  fft.inv(buf_pos, probe_mom);
  Vector conditional(n);
  for (int k = 0; k < n; ++k) conditional(k) = buf_pos[k];
  const ProbeGrid probe_out = xi.with_amps(std::move(conditional));

  out.success_prob = probe_out.squared_norm();
  const ProbeShifts oracle = measured_shifts(xi, probe_out);
  out.oracle_dq = oracle.dq;
  out.oracle_dp = oracle.dp;
  return out;
}

}  // namespace wvsim
