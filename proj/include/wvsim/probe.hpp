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

#ifndef WVSIM_PROBE_HPP
#define WVSIM_PROBE_HPP

#include <optional>
#include <vector>

#include "wvsim/weak_values.hpp"

namespace wvsim {

struct GridSpec {
  int n_points = 1024;  // power of two
  double x_min = -20.0;
  double x_max = 20.0;
  double mass = 1.0;
};

// Discretized one-dimensional probe wavefunction on a periodic grid
// x_k = x_min + k dx. Probe Hamiltonian P^2/2m + V(Q), with V optional.
// Construction normalizes; operations that post-select return unnormalized
// amplitudes whose squared norm is the success probability.
class ProbeGrid {
 public:
  static ProbeGrid from_samples(const GridSpec& spec, Vector amps,
                                bool normalize = true);

  int n_points() const { return n_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double dx() const { return dx_; }
  double mass() const { return mass_; }
  double x(int k) const { return x_min_ + k * dx_; }
  const Vector& amps() const { return amps_; }
  const std::optional<Eigen::VectorXd>& potential() const { return potential_; }

  double squared_norm() const;  // integral of |amps|^2 dx
  ProbeGrid normalized() const;
  ProbeGrid with_potential(Eigen::VectorXd v) const;
  ProbeGrid with_amps(Vector amps) const;  // same grid, new amplitudes

 private:
  ProbeGrid() = default;
  int n_ = 0;
  double x_min_ = 0, x_max_ = 0, dx_ = 0, mass_ = 1;
  Vector amps_;
  std::optional<Eigen::VectorXd> potential_;
};

// Real-valued normalized Gaussian of the given center and width (stddev of
// the position distribution). Guards: width > 3 dx, window >= 10 width, and
// the sampled edge amplitudes must stay below 1e-8 of the peak.
ProbeGrid gaussian_probe(double center, double width, const GridSpec& spec);

// 1024 points, window center +/- 20 widths.
GridSpec default_grid(double width, double center = 0.0, double mass = 1.0);

struct ProbeMoments {
  double mean_q = 0, mean_p = 0, var_q = 0, var_p = 0;
  // (<{Q,P}> - 2<Q><P>) / m, from the Ehrenfest relations; no time stepping.
  double d_var_q_dt = 0;
};

ProbeMoments probe_moments(const ProbeGrid& xi);

// exp(-i s P) xi: exact translation via momentum-space phases.
ProbeGrid translate(const ProbeGrid& xi, double shift);

// exp(-i t P^2 / 2m) xi (test oracle helper; ignores the potential).
ProbeGrid free_evolve(const ProbeGrid& xi, double time);

struct VonNeumannResult {
  ProbeGrid probe;      // unnormalized conditional probe state
  double success_prob;  // squared norm of the conditional state
};

// |xi'> = <f| U_after e^{-i g (A x P)} U_before |i> |xi> by spectral
// decomposition of A: each eigenbranch translates the probe by g a_j. No
// weak-coupling approximation anywhere.
VonNeumannResult exact_von_neumann(const PrePostSelection& sel, const QOperator& a,
                                   const ProbeGrid& xi, double g);

// For projector A: overlap * [(1 - A_w) xi + A_w translate(xi, g)].
// Independent closed-form route used to cross-check the spectral method.
ProbeGrid projector_full_order_probe(const PrePostSelection& sel,
                                     const QOperator& a, const ProbeGrid& xi,
                                     double g,
                                     double overlap_floor = kDefaultOverlapFloor);

struct ProbeShifts {
  double dq = 0;
  double dp = 0;
};

// First-order probe shifts: dq = g Re(w) + m g Im(w) dVar[Q]/dt,
// dp = 2 g Im(w) Var[P], with moments taken from xi.
ProbeShifts first_order_shifts(Complex weak_val, const ProbeGrid& xi, double g);

// Normalized-moment shifts of `after` relative to `before`.
ProbeShifts measured_shifts(const ProbeGrid& before, const ProbeGrid& after);

struct WeakLimitPoint {
  double g = 0;
  double dq_exact = 0, dp_exact = 0;
  double dq_formula = 0, dp_formula = 0;
  double err_q = 0, err_p = 0;
};

struct WeakLimitReport {
  std::vector<WeakLimitPoint> points;
  Complex weak_val;
  // Log-log slope of the residual against g; +inf when the residual sits at
  // the numerical noise floor for every g (exact cases).
  double order_q = 0, order_p = 0;
  // Leading Delta/g coefficients extrapolated from the two smallest g.
  double coeff_q = 0, coeff_p = 0;
  double formula_coeff_q = 0, formula_coeff_p = 0;
};

WeakLimitReport verify_weak_limit(const PrePostSelection& sel, const QOperator& a,
                                  const ProbeGrid& xi,
                                  const std::vector<double>& g_list);

// Slope of ln(err) vs ln(g) ignoring points at the noise floor; +inf when
// fewer than two points remain.
double fit_log_order(const std::vector<double>& g, const std::vector<double>& err,
                     double noise_floor = 1e-13);

}  // namespace wvsim

#endif  // WVSIM_PROBE_HPP
