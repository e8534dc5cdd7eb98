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

#include "wvsim/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "wvsim/channels.hpp"
#include "wvsim/decoherence.hpp"
#include "wvsim/probe.hpp"
#include "wvsim/protective.hpp"
#include "wvsim/qubit.hpp"
#include "wvsim/rng.hpp"
#include "wvsim/two_state.hpp"
#include "wvsim/weak_values.hpp"

namespace wvsim {

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string residual_detail(double worst, double tol) {
  std::ostringstream os;
  os << "max residual " << worst << " (tol " << tol << ")";
  return os.str();
}

Outcome bounded(double worst, double tol) {
  return Outcome{worst <= tol, residual_detail(worst, tol)};
}

PrePostSelection random_selection(Rng& rng, int dim, double min_overlap = 0.05) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    PrePostSelection sel(rng.random_state(dim), rng.random_state(dim),
                         rng.random_unitary(dim), rng.random_unitary(dim));
    if (std::abs(sel.overlap()) >= min_overlap) return sel;
  }
  throw SimError(Guard::NearOrthogonalSelection,
                 "could not draw a well-overlapping selection");
}

std::vector<QState> unitary_columns(const QOperator& u) {
  std::vector<QState> basis;
  for (int k = 0; k < u.dim(); ++k) {
    basis.push_back(QState(u.matrix().col(k)));
  }
  return basis;
}

// ---------------------------------------------------------------------------
// identities suite
// ---------------------------------------------------------------------------

Outcome check_expectation_identity(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = rng.uniform_int(2, 8);
    const QState psi = rng.random_state(dim);
    const QOperator a = rng.random_hermitian(dim);
    const Complex direct = psi.amps().dot(a.matrix() * psi.amps());
    const Complex via =
        expectation_via_weak_values(psi, a, computational_basis(dim));
    worst = std::max(worst, std::abs(via - direct));
  }
  return bounded(worst, 1e-9);
}

Outcome check_variance_identity(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = rng.uniform_int(2, 8);
    const QState psi = rng.random_state(dim);
    const QOperator a = rng.random_hermitian(dim);
    const Complex mean = psi.amps().dot(a.matrix() * psi.amps());
    const Complex second = psi.amps().dot(a.matrix() * (a.matrix() * psi.amps()));
    const Complex via = variance_via_weak_values(psi, a, computational_basis(dim));
    worst = std::max(worst, std::abs(via - (second - mean * mean)));
  }
  return bounded(worst, 1e-9);
}

Outcome check_bayes_identity(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const int dim = rng.uniform_int(2, 8);
    const QState psi = rng.random_state(dim);
    const QState a = rng.random_state(dim);
    const double via = bayes_decomposition(psi, a, computational_basis(dim));
    worst = std::max(worst, std::abs(via - std::norm(inner(a, psi))));
  }
  return bounded(worst, 1e-10);
}

Outcome check_completeness(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = rng.uniform_int(2, 8);
    const PrePostSelection sel = random_selection(rng, dim);
    const Complex sum = completeness_sum(sel, computational_basis(dim));
    worst = std::max(worst, std::abs(sum - Complex(1.0, 0.0)));
  }
  return bounded(worst, 1e-10);
}

Outcome check_linearity(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = rng.uniform_int(2, 6);
    const PrePostSelection sel = random_selection(rng, dim);
    const QOperator a = rng.random_hermitian(dim);
    const QOperator b = rng.random_hermitian(dim);
    const Complex alpha(rng.gaussian(), rng.gaussian());
    const Complex beta(rng.gaussian(), rng.gaussian());
    const QOperator combo =
        QOperator::general(alpha * a.matrix() + beta * b.matrix());
    const Complex lhs = weak_value(sel, combo).value;
    const Complex rhs = alpha * weak_value(sel, a).value +
                        beta * weak_value(sel, b).value;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return bounded(worst, 1e-10);
}

Outcome check_eigenstate_anchoring(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = rng.uniform_int(2, 6);
    const QOperator a = rng.random_hermitian(dim);
    Eigensystem eig = eigendecompose_hermitian(a);
    const int which = rng.uniform_int(0, dim - 1);
    const QState pre = QState(eig.eigenvectors.col(which));
    QState post = rng.random_state(dim);
    if (std::abs(inner(post, pre)) < 0.05) continue;
    const Complex w =
        weak_value(PrePostSelection::trivial(pre, post), a).value;
    worst = std::max(worst, std::abs(w - Complex(eig.eigenvalues(which), 0.0)));
  }
  return bounded(worst, 1e-9);
}

Outcome check_basis_independence(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const int dim = rng.uniform_int(2, 7);
    const QState psi = rng.random_state(dim);
    const QOperator a = rng.random_hermitian(dim);
    const Complex via1 =
        expectation_via_weak_values(psi, a, unitary_columns(rng.random_unitary(dim)));
    const Complex via2 =
        expectation_via_weak_values(psi, a, unitary_columns(rng.random_unitary(dim)));
    worst = std::max(worst, std::abs(via1 - via2));
  }
  return bounded(worst, 1e-9);
}

Outcome check_geometric_phase(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = rng.uniform_int(2, 6);
    const QState p1 = rng.random_state(dim);
    const QState p2 = rng.random_state(dim);
    const QState p3 = rng.random_state(dim);
    if (std::abs(inner(p1, p2)) < 0.05 || std::abs(inner(p2, p3)) < 0.05 ||
        std::abs(inner(p3, p1)) < 0.05) {
      continue;
    }
    const double base = geometric_phase(p1, p2, p3);
    auto rephase = [&](const QState& s) {
      return QState(std::exp(Complex(0.0, rng.uniform(0.0, 6.28))) * s.amps());
    };
    const double gauged = geometric_phase(rephase(p1), rephase(p2), rephase(p3));
    const double swapped = geometric_phase(p3, p2, p1);
    worst = std::max(worst, std::abs(gauged - base));
    worst = std::max(worst, std::abs(swapped + base));
    // Equality with the weak-value argument: pre psi3, post psi1.
    const Complex w =
        weak_value(PrePostSelection::trivial(p3, p1),
                   QOperator::projector(p2.amps() * p2.amps().adjoint()))
            .value;
    worst = std::max(worst, std::abs(std::arg(w) - base));
  }
  return bounded(worst, 1e-12);
}

Outcome check_abl_consistency(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = rng.uniform_int(2, 6);
    const PrePostSelection sel = random_selection(rng, dim);
    const QOperator a = rng.random_hermitian(dim);
    const AblDistribution abl = abl_probabilities(sel, a);
    double sum = 0;
    for (double p : abl.probabilities) {
      sum += p;
      if (p < -1e-15 || p > 1.0 + 1e-12) worst = 1.0;
    }
    worst = std::max(worst, std::abs(sum - 1.0));

    // Dual route through the W operator.
    SpectralProjectors spec = eigenprojectors(a);
    std::vector<QOperator> family;
    for (const Matrix& p : spec.projectors) family.push_back(QOperator::projector(p));
    const std::vector<double> from_w = abl_from_w(build_w(sel), family);
    for (size_t k = 0; k < from_w.size(); ++k) {
      worst = std::max(worst, std::abs(from_w[k] - abl.probabilities[k]));
    }

    // Time-reversal: swap (|i>, U) <-> (|f>, V^dag).
    const PrePostSelection swapped(sel.post(), sel.pre(), sel.u_after().dagger(),
                                   sel.u_before().dagger());
    const AblDistribution rev = abl_probabilities(swapped, a);
    for (size_t k = 0; k < rev.probabilities.size(); ++k) {
      worst = std::max(worst, std::abs(rev.probabilities[k] - abl.probabilities[k]));
    }
  }
  return bounded(worst, 1e-12);
}

Outcome check_w_scalar_invariance(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const int dim = rng.uniform_int(2, 6);
    const PrePostSelection sel = random_selection(rng, dim);
    const QOperator a = rng.random_hermitian(dim);
    const WOperator w = build_w(sel);
    const Complex direct = weak_value(sel, a).value;
    const Complex via_w = weak_value_from_w(w, a);
    worst = std::max(worst, std::abs(direct - via_w));
    const Complex scale(rng.gaussian() + 2.0, rng.gaussian());
    const WOperator scaled(scale * w.matrix());
    worst = std::max(worst, std::abs(weak_value_from_w(scaled, a) - via_w));
  }
  return bounded(worst, 1e-12);
}

// ---------------------------------------------------------------------------
// channels suite
// ---------------------------------------------------------------------------

Outcome check_dilation_oracle(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int ds = rng.uniform_int(2, 4);
    const int dp = rng.uniform_int(2, 3);
    const QOperator u = rng.random_unitary(ds * dp);
    const QState probe_init = rng.random_state(dp);
    const Channel ch =
        kraus_from_dilation(u, probe_init, computational_basis(dp), ds);
    const DensityOp rho = rng.random_density(ds);
    const DensityOp via_channel = apply_to_density(ch, rho);

    const Matrix joint = kron(rho.matrix(), probe_init.amps() * probe_init.amps().adjoint());
    const Matrix evolved = u.matrix() * joint * u.matrix().adjoint();
    const Matrix reduced = partial_trace_matrix(evolved, ds, dp, Subsystem::First);
    worst = std::max(worst, max_abs(via_channel.matrix() - reduced));

    Matrix norm_e = Matrix::Zero(ds, ds);
    for (const Matrix& e : ch.kraus_e()) norm_e += e.adjoint() * e;
    worst = std::max(worst, max_abs(norm_e - Matrix::Identity(ds, ds)));
  }
  return bounded(worst, 1e-9);
}

Outcome check_povm(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int ds = rng.uniform_int(2, 4);
    const QOperator u = rng.random_unitary(ds * 2);
    const Channel ch =
        kraus_from_dilation(u, rng.random_state(2), computational_basis(2), ds);
    const Povm povm = povm_from_channel(ch);  // PSD/completeness checked inside
    const DensityOp rho = rng.random_density(ds);
    const std::vector<double> probs = born_probabilities(rho, povm);
    double sum = 0;
    for (double p : probs) sum += p;
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return bounded(worst, 1e-9);
}

Outcome check_channel_positivity(Rng& rng) {
  for (int trial = 0; trial < 30; ++trial) {
    const int ds = rng.uniform_int(2, 8);
    const QOperator u = rng.random_unitary(ds * 2);
    const Channel ch =
        kraus_from_dilation(u, rng.random_state(2), computational_basis(2), ds);
    // DensityOp construction re-validates hermiticity, PSD and unit trace.
    apply_to_density(ch, rng.random_density(ds));
    if (choi_minimum_eigenvalue(ch) < -1e-10) {
      return Outcome{false, "Choi matrix has a negative eigenvalue"};
    }
  }
  return Outcome{true, "trace/positivity preserved, Choi PSD"};
}

Outcome check_channel_composition(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int ds = rng.uniform_int(2, 4);
    const Channel ch1 = kraus_from_dilation(rng.random_unitary(ds * 2),
                                            rng.random_state(2),
                                            computational_basis(2), ds);
    const Channel ch2 = kraus_from_dilation(rng.random_unitary(ds * 2),
                                            rng.random_state(2),
                                            computational_basis(2), ds);
    const DensityOp rho = rng.random_density(ds);
    const DensityOp sequential = apply_to_density(ch2, apply_to_density(ch1, rho));
    const DensityOp merged = apply_to_density(compose(ch2, ch1), rho);
    worst = std::max(worst, max_abs(sequential.matrix() - merged.matrix()));
  }
  return bounded(worst, 1e-9);
}

Outcome check_w_counterexample(Rng&) {
  // Dephasing channel on W = |+><0|: E(W) E(W)^dag differs from E(W W^dag).
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1;
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1;
  const Channel dephase = Channel::symmetric({p0, p1});
  Vector plus(2);
  plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  const QState pre(plus);
  const QState post = QState::basis(2, 0);
  const WOperator w(pre.amps() * post.amps().adjoint());
  const Matrix ew = apply_to_w(dephase, w).matrix();
  const Matrix lhs = ew * ew.adjoint();
  const Matrix rho = w.matrix() * w.matrix().adjoint();
  const Matrix rhs = apply_to_density(dephase, DensityOp(rho)).matrix();
  const double gap = max_abs(lhs - rhs);
  std::ostringstream os;
  os << "E(W)E(W)^dag vs E(rho) gap " << gap << " (> 1e-3 required)";
  return Outcome{gap > 1e-3, os.str()};
}

Outcome check_symmetric_channel_trace(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int ds = rng.uniform_int(2, 4);
    const Channel ch = kraus_from_dilation(rng.random_unitary(ds * 2),
                                           rng.random_state(2),
                                           computational_basis(2), ds);
    const DensityOp rho = rng.random_density(ds);
    const WOperator as_w(rho.matrix());
    const Complex tr = apply_to_w(ch, as_w).trace();
    worst = std::max(worst, std::abs(tr - Complex(1.0, 0.0)));
  }
  return bounded(worst, 1e-10);
}

Outcome check_s_matrix_closed_form(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const int ds = 2, de = 2;
    const QOperator u = rng.random_unitary(ds * de);
    const QOperator v = rng.random_unitary(ds * de);
    const QState e_i = rng.random_state(de);
    const QState e_f = rng.random_state(de);
    const Channel ch = channel_from_factorization(u, v, e_i, e_f,
                                                  computational_basis(de), ds);
    worst = std::max(worst, s_matrix_identity_check(ch, u, v, e_i, e_f));
  }
  return bounded(worst, 1e-9);
}

// ---------------------------------------------------------------------------
// probe suite
// ---------------------------------------------------------------------------

Outcome check_gaussian_moments(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const double width = rng.uniform(0.5, 2.0);
    const double center = rng.uniform(-2.0, 2.0);
    const ProbeGrid xi = gaussian_probe(center, width, default_grid(width, center));
    const ProbeMoments m = probe_moments(xi);
    worst = std::max(worst, std::abs(m.mean_q - center));
    worst = std::max(worst, std::abs(m.mean_p));
    worst = std::max(worst, std::abs(m.var_q / (width * width) - 1.0) * 1e-3);
    worst = std::max(worst,
                     std::abs(m.var_p * 4.0 * width * width - 1.0) * 1e-3);
    worst = std::max(worst, std::abs(m.d_var_q_dt));
  }
  return bounded(worst, 1e-9);
}

// d Var[Q]/dt against a central finite difference of free evolution.
Outcome check_dvar_oracle(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const double width = rng.uniform(0.8, 1.5);
    const double chirp = rng.uniform(-0.3, 0.3);
    const GridSpec spec = default_grid(width);
    Vector amps(spec.n_points);
    const double dx = (spec.x_max - spec.x_min) / spec.n_points;
    for (int k = 0; k < spec.n_points; ++k) {
      const double x = spec.x_min + k * dx;
      amps(k) = std::exp(Complex(-x * x / (4.0 * width * width), chirp * x * x));
    }
    const ProbeGrid xi = ProbeGrid::from_samples(spec, std::move(amps));
    const double analytic = probe_moments(xi).d_var_q_dt;
    const double dt = 1e-4;
    const double plus = probe_moments(free_evolve(xi, dt)).var_q;
    const double minus = probe_moments(free_evolve(xi, -dt)).var_q;
    const double fd = (plus - minus) / (2.0 * dt);
    worst = std::max(worst, std::abs(analytic - fd));
  }
  return bounded(worst, 1e-6);
}

Outcome check_full_order_identity(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const int dim = rng.uniform_int(2, 4);
    const PrePostSelection sel = random_selection(rng, dim);
    const QOperator proj = rng.random_projector(dim, rng.uniform_int(1, dim - 1));
    const ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0));
    const double g = rng.uniform(0.0, 5.0);
    const ProbeGrid spectral = exact_von_neumann(sel, proj, xi, g).probe;
    const ProbeGrid closed = projector_full_order_probe(sel, proj, xi, g);
    worst = std::max(worst,
                     (spectral.amps() - closed.amps()).cwiseAbs().maxCoeff());
  }
  return bounded(worst, 1e-10);
}

Outcome check_weak_limit_orders(Rng& rng) {
  const std::vector<double> g_list{1e-2, 1e-3, 1e-4, 1e-5};
  double min_order = 1e9;
  for (int trial = 0; trial < 6; ++trial) {
    const int dim = (trial % 2 == 0) ? 2 : 3;
    const PrePostSelection sel = random_selection(rng, dim, 0.2);
    const QOperator a = rng.random_hermitian(dim);
    const ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0));
    const WeakLimitReport report = verify_weak_limit(sel, a, xi, g_list);
    min_order = std::min(min_order, report.order_q);
    min_order = std::min(min_order, report.order_p);
  }
  std::ostringstream os;
  os << "min fitted residual order " << min_order << " (>= 1.9 required)";
  return Outcome{min_order >= 1.9, os.str()};
}

// Success probability against a tensor-product evolution that shifts branch
// amplitudes by integer grid bins (no Fourier transform anywhere).
Outcome check_norm_accounting(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = rng.uniform_int(2, 4);
    const PrePostSelection sel = random_selection(rng, dim);
    const QOperator proj = rng.random_projector(dim, 1);
    const ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0));
    const int bins = rng.uniform_int(1, 40);
    const double g = bins * xi.dx();

    const double fast = exact_von_neumann(sel, proj, xi, g).success_prob;

    // Independent route: project onto the two eigenbranches, roll the
    // shifted branch circularly, recombine, post-select.
    Eigensystem eig = eigendecompose_hermitian(proj);
    const Vector forward = sel.u_before().matrix() * sel.pre().amps();
    const Vector backward = sel.u_after().matrix().adjoint() * sel.post().amps();
    Vector out = Vector::Zero(xi.n_points());
    for (int j = 0; j < dim; ++j) {
      const Complex amp = backward.dot(eig.eigenvectors.col(j)) *
                          eig.eigenvectors.col(j).dot(forward);
      const int roll =
          (std::abs(eig.eigenvalues(j) - 1.0) < 1e-9) ? bins : 0;
      for (int k = 0; k < xi.n_points(); ++k) {
        const int src = (k - roll + xi.n_points()) % xi.n_points();
        out(k) += amp * xi.amps()(src);
      }
    }
    const double slow = out.squaredNorm() * xi.dx();
    worst = std::max(worst, std::abs(fast - slow));
  }
  return bounded(worst, 1e-10);
}

Outcome check_g_zero_reduction(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const int dim = rng.uniform_int(2, 5);
    const PrePostSelection sel(rng.random_state(dim), rng.random_state(dim),
                               rng.random_unitary(dim), rng.random_unitary(dim));
    const QOperator a = rng.random_hermitian(dim);
    const ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0));
    const ProbeGrid out = exact_von_neumann(sel, a, xi, 0.0).probe;
    const Vector expected = sel.overlap() * xi.amps();
    worst = std::max(worst, (out.amps() - expected).cwiseAbs().maxCoeff());
  }
  return bounded(worst, 1e-14);
}

// ---------------------------------------------------------------------------
// cnot suite
// ---------------------------------------------------------------------------

Outcome check_cnot_closed_vs_circuit(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const QState pre = rng.random_state(2);
    const QState post = rng.random_state(2);
    const double eps = rng.uniform(-0.45, 0.45);
    const double gamma_p = std::sqrt(0.5 + eps);
    const double eta_p = std::sqrt(0.5 - eps);
    const int k = rng.uniform_int(0, 1);
    try {
      const CnotReadout r =
          cnot_readout(pre.amp(0), pre.amp(1), gamma_p, eta_p, post, k);
      worst = std::max(worst, std::abs(r.prob - r.prob_circuit));
    } catch (const SimError& e) {
      if (e.guard() != Guard::AllPathsVanish && e.guard() != Guard::GammaEqualsEta) {
        throw;
      }
    }
  }
  return bounded(worst, 1e-12);
}

Outcome check_cnot_strong_limit(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const QState pre = rng.random_state(2);
    const QState post = rng.random_state(2);
    const int k = rng.uniform_int(0, 1);
    const PrePostSelection sel = PrePostSelection::trivial(pre, post);
    Matrix pk = Matrix::Zero(2, 2);
    pk(k, k) = 1.0;
    try {
      const double prob =
          cnot_readout(pre.amp(0), pre.amp(1), 1.0, 0.0, post, k).prob;
      const AblDistribution abl = abl_probabilities(sel, QOperator::projector(pk));
      // Eigenvalue 1 of the projector marks "outcome k".
      const double abl_k =
          (std::abs(abl.eigenvalues.back() - 1.0) < 1e-9) ? abl.probabilities.back()
                                                          : abl.probabilities.front();
      worst = std::max(worst, std::abs(prob - abl_k));
    } catch (const SimError& e) {
      if (e.guard() != Guard::AllPathsVanish) throw;
    }
  }
  return bounded(worst, 1e-12);
}

Outcome check_cnot_estimate(Rng& rng) {
  const std::vector<double> eps_list{-0.02, -0.01, 0.005, 0.01, 0.02};  // 5 points
  double worst = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const QState pre = rng.random_state(2);
    const QState post = rng.random_state(2);
    if (std::abs(inner(post, pre)) < 0.2) continue;
    const int k = rng.uniform_int(0, 1);
    const CnotEstimate est = cnot_weak_value_estimate(pre, post, k, eps_list);
    worst = std::max(worst, std::abs(est.re_estimate - est.weak_val.real()));
    worst = std::max(worst, std::abs(est.eps_slope - est.slope_prediction));
  }
  return bounded(worst, 1e-6);
}

Outcome check_qubit_weak_value_dual(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::Vector3d ri(rng.gaussian(), rng.gaussian(), rng.gaussian());
    Eigen::Vector3d rf(rng.gaussian(), rng.gaussian(), rng.gaussian());
    Eigen::Vector3d n(rng.gaussian(), rng.gaussian(), rng.gaussian());
    ri.normalize();
    rf.normalize();
    n.normalize();
    if (1.0 + ri.dot(rf) < 0.1) continue;
    const Complex closed =
        qubit_weak_value(BlochVector(ri), BlochVector(rf), n);
    const QState pre = state_from_bloch(BlochVector(ri));
    const QState post = state_from_bloch(BlochVector(rf));
    const Complex from_states =
        weak_value(PrePostSelection::trivial(pre, post), pauli_dot(n)).value;
    worst = std::max(worst, std::abs(closed - from_states));
  }
  return bounded(worst, 1e-10);
}

Outcome check_qubit_shift_residual(Rng& rng) {
  double worst_ratio = 0;
  for (int trial = 0; trial < 15; ++trial) {
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
    for (double g : {1e-2, 1e-3, 1e-4}) {
      const QubitShiftResult r =
          qubit_probe_shift(BlochVector(ri), BlochVector(rf), BlochVector(m), v,
                            q, pauli_z(), g);
      worst_ratio = std::max(worst_ratio, std::abs(r.exact - r.formula) / (g * g));
    }
  }
  std::ostringstream os;
  os << "max |exact - formula| / g^2 = " << worst_ratio << " (bound 100)";
  return Outcome{worst_ratio <= 100.0, os.str()};
}

// ---------------------------------------------------------------------------
// decoherence suite
// ---------------------------------------------------------------------------

EnvironmentModel random_environment(Rng& rng, double coupling_scale) {
  const QOperator h0 = rng.random_hermitian(2);
  Matrix h1 = coupling_scale * rng.random_hermitian(4).matrix();
  return EnvironmentModel(h0, QOperator::hermitian(std::move(h1)),
                          rng.random_state(2), rng.random_state(2),
                          computational_basis(2), 0.0, 0.7, 1.5);
}

Outcome check_dressed_normalizations(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const EnvironmentModel env = random_environment(rng, 0.8);
    const Channel ch = dressed_channel(env);
    Matrix sum_e = Matrix::Zero(2, 2);
    Matrix sum_f = Matrix::Zero(2, 2);
    for (const Matrix& e : ch.kraus_e()) sum_e += e.adjoint() * e;
    for (const Matrix& f : ch.kraus_f()) sum_f += f.adjoint() * f;
    worst = std::max(worst, max_abs(sum_e - Matrix::Identity(2, 2)));
    worst = std::max(worst, max_abs(sum_f - Matrix::Identity(2, 2)));
  }
  return bounded(worst, 1e-8);
}

Outcome check_sma_sliced(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const EnvironmentModel env = random_environment(rng, 0.8);
    const Channel ch = dressed_channel(env);
    const Matrix h_total =
        kron(env.h0.matrix(), Matrix::Identity(2, 2)) + env.h1.matrix();
    Eigen::SelfAdjointEigenSolver<Matrix> sol(h_total);
    auto expm_at = [&](double tau) {
      Vector ph(4);
      for (int k = 0; k < 4; ++k) {
        ph(k) = std::exp(Complex(0.0, -tau * sol.eigenvalues()(k)));
      }
      return QOperator::unitary(sol.eigenvectors() * ph.asDiagonal() *
                                sol.eigenvectors().adjoint());
    };
    const QOperator u_exact = expm_at(env.t_0 - env.t_i);
    const QOperator v_exact = expm_at(env.t_f - env.t_0);
    worst = std::max(worst, s_matrix_identity_check(ch, u_exact, v_exact,
                                                    env.env_init, env.env_final));
  }
  return bounded(worst, 1e-8);
}

Outcome check_h1_zero_reduction(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 5; ++trial) {
    const QOperator h0 = rng.random_hermitian(2);
    const QState e_i = rng.random_state(2);
    const EnvironmentModel env(h0,
                               QOperator::hermitian(Matrix::Zero(4, 4)), e_i,
                               e_i, computational_basis(2), 0.0, 0.6, 1.3);
    const QState pre = rng.random_state(2);
    const QState post = rng.random_state(2);
    const QOperator a = rng.random_hermitian(2);

    const Complex dressed = decoherent_weak_value(env, pre, post, a);
    const QOperator u0 = matrix_exponential(h0, Complex(0.0, -(env.t_0 - env.t_i)));
    const QOperator v0 = matrix_exponential(h0, Complex(0.0, -(env.t_f - env.t_0)));
    const Complex plain = weak_value(PrePostSelection(pre, post, u0, v0), a).value;
    worst = std::max(worst, std::abs(dressed - plain));
  }
  return bounded(worst, 1e-10);
}

Outcome check_commuting_closed_form(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 5; ++trial) {
    // h1 built from functions of h0 on the target commutes with h0 (x) 1.
    const QOperator h0 = rng.random_hermitian(2);
    Eigensystem eig = eigendecompose_hermitian(h0);
    Matrix diag_target = Matrix::Zero(2, 2);
    diag_target += rng.gaussian() * eig.eigenvectors.col(0) *
                   eig.eigenvectors.col(0).adjoint();
    diag_target += rng.gaussian() * eig.eigenvectors.col(1) *
                   eig.eigenvectors.col(1).adjoint();
    const Matrix h1 = kron(diag_target, rng.random_hermitian(2).matrix());
    const EnvironmentModel env(h0, QOperator::hermitian(h1), rng.random_state(2),
                               rng.random_state(2), computational_basis(2), 0.0,
                               0.8, 1.7);
    const DressedPropagators props = dressed_propagators(env);
    const Matrix h_total = kron(h0.matrix(), Matrix::Identity(2, 2)) + h1;
    const Matrix u_exact =
        matrix_exponential(QOperator::hermitian(h_total),
                           Complex(0.0, -(env.t_0 - env.t_i)))
            .matrix();
    const Matrix v_exact =
        matrix_exponential(QOperator::hermitian(h_total),
                           Complex(0.0, -(env.t_f - env.t_0)))
            .matrix();
    worst = std::max(worst, max_abs(props.u_full.matrix() - u_exact));
    worst = std::max(worst, max_abs(props.v_full.matrix() - v_exact));
  }
  return bounded(worst, 1e-10);
}

Outcome check_rephasing_invariance(Rng& rng) {
  double worst = 0;
  for (int trial = 0; trial < 3; ++trial) {
    const EnvironmentModel env = random_environment(rng, 0.8);
    const QState pre = rng.random_state(2);
    const QState post = rng.random_state(2);
    const QOperator a = rng.random_hermitian(2);
    const Complex base = decoherent_weak_value(env, pre, post, a);
    std::vector<QState> rephased;
    for (const QState& em : env.env_basis) {
      rephased.push_back(
          QState(std::exp(Complex(0.0, rng.uniform(0.0, 6.28))) * em.amps()));
    }
    const EnvironmentModel env2(env.h0, env.h1, env.env_init, env.env_final,
                                rephased, env.t_i, env.t_0, env.t_f);
    worst = std::max(worst, std::abs(decoherent_weak_value(env2, pre, post, a) - base));
  }
  return bounded(worst, 1e-12);
}

Outcome check_decoherent_shift_order(Rng& rng) {
  const EnvironmentModel env = random_environment(rng, 0.6);
  const QState pre = rng.random_state(2);
  const QState post = rng.random_state(2);
  const QOperator a = pauli_z();
  const ProbeGrid xi = gaussian_probe(0.0, 1.0, default_grid(1.0));
  std::vector<double> gs, eq, ep;
  for (double g : {3e-3, 1e-3, 3e-4, 1e-4}) {
    const DecoherentShifts s = decoherent_probe_shifts(env, pre, post, a, xi, g);
    gs.push_back(g);
    eq.push_back(std::abs(s.dq - s.oracle_dq));
    ep.push_back(std::abs(s.dp - s.oracle_dp));
  }
  const double oq = fit_log_order(gs, eq);
  const double op = fit_log_order(gs, ep);
  std::ostringstream os;
  os << "residual orders q=" << oq << " p=" << op << " (>= 1.9 required)";
  return Outcome{oq >= 1.9 && op >= 1.9, os.str()};
}

// ---------------------------------------------------------------------------

struct Check {
  const char* name;
  std::function<Outcome(Rng&)> fn;
};

const std::vector<std::pair<std::string, std::vector<Check>>>& registry() {
  static const std::vector<std::pair<std::string, std::vector<Check>>> reg = {
      {"identities",
       {{"expectation_identity", check_expectation_identity},
        {"variance_identity", check_variance_identity},
        {"bayes_identity", check_bayes_identity},
        {"completeness_sum", check_completeness},
        {"weak_value_linearity", check_linearity},
        {"eigenstate_anchoring", check_eigenstate_anchoring},
        {"basis_independence", check_basis_independence},
        {"geometric_phase", check_geometric_phase},
        {"abl_consistency", check_abl_consistency},
        {"w_operator_cross_checks", check_w_scalar_invariance}}},
      {"channels",
       {{"dilation_oracle", check_dilation_oracle},
        {"povm_completeness", check_povm},
        {"trace_positivity_choi", check_channel_positivity},
        {"composition", check_channel_composition},
        {"w_channel_counterexample", check_w_counterexample},
        {"symmetric_channel_trace", check_symmetric_channel_trace},
        {"s_matrix_closed_form", check_s_matrix_closed_form}}},
      {"probe",
       {{"gaussian_moments", check_gaussian_moments},
        {"dvar_dt_finite_difference", check_dvar_oracle},
        {"full_order_identity", check_full_order_identity},
        {"weak_limit_orders", check_weak_limit_orders},
        {"norm_accounting", check_norm_accounting},
        {"g_zero_reduction", check_g_zero_reduction}}},
      {"cnot",
       {{"closed_form_vs_circuit", check_cnot_closed_vs_circuit},
        {"strong_limit_abl", check_cnot_strong_limit},
        {"weak_value_estimate", check_cnot_estimate},
        {"qubit_weak_value_dual_route", check_qubit_weak_value_dual},
        {"qubit_shift_residual", check_qubit_shift_residual}}},
      {"decoherence",
       {{"dressed_normalizations", check_dressed_normalizations},
        {"s_matrix_sliced", check_sma_sliced},
        {"h1_zero_reduction", check_h1_zero_reduction},
        {"commuting_closed_form", check_commuting_closed_form},
        {"rephasing_invariance", check_rephasing_invariance},
        {"shift_residual_order", check_decoherent_shift_order}}},
  };
  return reg;
}

}  // namespace

std::vector<std::string> verify_suite_names() {
  std::vector<std::string> names;
  for (const auto& [suite, checks] : registry()) names.push_back(suite);
  names.push_back("all");
  return names;
}

std::vector<CheckResult> run_verify_suite(const std::string& suite, uint64_t seed) {
  bool found = false;
  std::vector<CheckResult> results;
  for (const auto& [name, checks] : registry()) {
    if (suite != "all" && suite != name) continue;
    found = true;
    uint64_t counter = 0;
    for (const Check& check : checks) {
      Rng rng(seed * 1000003ull + counter++);
      CheckResult r;
      r.suite = name;
      r.name = check.name;
      const auto start = std::chrono::steady_clock::now();
      try {
        Outcome outcome = check.fn(rng);
        r.pass = outcome.pass;
        r.detail = outcome.detail;
      } catch (const std::exception& e) {
        r.pass = false;
        r.detail = std::string("exception: ") + e.what();
      }
      const auto stop = std::chrono::steady_clock::now();
      r.millis = std::chrono::duration<double, std::milli>(stop - start).count();
      results.push_back(std::move(r));
    }
  }
  if (!found) {
    throw SimError(Guard::InvalidArgument, "unknown verify suite '" + suite + "'");
  }
  return results;
}

}  // namespace wvsim
