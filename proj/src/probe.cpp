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

#include "wvsim/probe.hpp"

#include <cmath>
#include <limits>

#include <unsupported/Eigen/FFT>

namespace wvsim {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

std::vector<Complex> to_std(const Vector& v) {
  return std::vector<Complex>(v.data(), v.data() + v.size());
}

Vector from_std(const std::vector<Complex>& v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (size_t k = 0; k < v.size(); ++k) out(static_cast<Eigen::Index>(k)) = v[k];
  return out;
}

Vector fft_forward(const Vector& v) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in = to_std(v);
  std::vector<Complex> out;
  fft.fwd(out, in);
  return from_std(out);
}

Vector fft_inverse(const Vector& v) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in = to_std(v);
  std::vector<Complex> out;
  fft.inv(out, in);
  return from_std(out);
}

// Signed momentum value of FFT bin k.
double momentum_of_bin(int k, int n, double dx) {
  const double dp = 2.0 * kPi / (n * dx);
  return (k < n / 2) ? k * dp : (k - n) * dp;
}

}  // namespace

ProbeGrid ProbeGrid::from_samples(const GridSpec& spec, Vector amps, bool normalize) {
  if (!is_power_of_two(spec.n_points) || spec.n_points < 8) {
    throw SimError(Guard::GridResolution,
                   "n_points must be a power of two (>= 8)");
  }
  if (!(spec.x_max > spec.x_min)) {
    throw SimError(Guard::GridWindow, "x_max must exceed x_min");
  }
  if (!(spec.mass > 0)) {
    throw SimError(Guard::InvalidArgument, "probe mass must be positive");
  }
  if (amps.size() != spec.n_points) {
    throw SimError(Guard::DimensionMismatch, "sample count != n_points");
  }
  ProbeGrid grid;
  grid.n_ = spec.n_points;
  grid.x_min_ = spec.x_min;
  grid.x_max_ = spec.x_max;
  grid.dx_ = (spec.x_max - spec.x_min) / spec.n_points;
  grid.mass_ = spec.mass;
  grid.amps_ = std::move(amps);
  if (normalize) {
    const double n2 = grid.squared_norm();
    if (n2 < 1e-300) {
      throw SimError(Guard::ZeroVector, "cannot normalize a zero probe state");
    }
    grid.amps_ /= std::sqrt(n2);
  }
  return grid;
}

double ProbeGrid::squared_norm() const { return amps_.squaredNorm() * dx_; }

ProbeGrid ProbeGrid::normalized() const {
  const double n2 = squared_norm();
  if (n2 < 1e-300) {
    throw SimError(Guard::ZeroVector, "cannot normalize a zero probe state");
  }
  ProbeGrid out = *this;
  out.amps_ /= std::sqrt(n2);
  return out;
}

ProbeGrid ProbeGrid::with_potential(Eigen::VectorXd v) const {
  if (v.size() != n_) {
    throw SimError(Guard::DimensionMismatch, "potential samples != n_points");
  }
  ProbeGrid out = *this;
  out.potential_ = std::move(v);
  return out;
}

ProbeGrid ProbeGrid::with_amps(Vector amps) const {
  if (amps.size() != n_) {
    throw SimError(Guard::DimensionMismatch, "amplitude count != n_points");
  }
  ProbeGrid out = *this;
  out.amps_ = std::move(amps);
  return out;
}

GridSpec default_grid(double width, double center, double mass) {
  GridSpec spec;
  spec.n_points = 1024;
  spec.x_min = center - 20.0 * width;
  spec.x_max = center + 20.0 * width;
  spec.mass = mass;
  return spec;
}

ProbeGrid gaussian_probe(double center, double width, const GridSpec& spec) {
  const double dx = (spec.x_max - spec.x_min) / spec.n_points;
  if (!(width > 3.0 * dx)) {
    throw SimError(Guard::GridResolution, "gaussian width must exceed 3 dx");
  }
  if (spec.x_max - spec.x_min < 10.0 * width) {
    throw SimError(Guard::GridWindow, "window must span at least 10 widths");
  }
  Vector amps(spec.n_points);
  for (int k = 0; k < spec.n_points; ++k) {
    const double x = spec.x_min + k * dx;
    const double u = (x - center) / (2.0 * width);
    amps(k) = std::exp(-u * u);
  }
  ProbeGrid grid = ProbeGrid::from_samples(spec, std::move(amps), true);
  const double peak = grid.amps().cwiseAbs().maxCoeff();
  if (std::abs(grid.amps()(0)) > 1e-8 * peak ||
      std::abs(grid.amps()(spec.n_points - 1)) > 1e-8 * peak) {
    throw SimError(Guard::GridWindow,
                   "gaussian tail reaches the window edge (wrap-around risk)");
  }
  return grid;
}

ProbeMoments probe_moments(const ProbeGrid& xi) {
  const int n = xi.n_points();
  const double dx = xi.dx();
  const double n2 = xi.squared_norm();
  if (n2 < 1e-28) {
    throw SimError(Guard::ZeroVector, "probe norm vanishes; moments undefined");
  }

  double mean_q = 0, mean_q2 = 0;
  for (int k = 0; k < n; ++k) {
    const double w = std::norm(xi.amps()(k)) * dx;
    const double x = xi.x(k);
    mean_q += w * x;
    mean_q2 += w * x * x;
  }
  mean_q /= n2;
  mean_q2 /= n2;

  const Vector spectrum = fft_forward(xi.amps());
  double mean_p = 0, mean_p2 = 0;
  const double weight = dx / n;  // |xi~(p_k)|^2 dp / (2 pi) = |X_k|^2 dx / n
  for (int k = 0; k < n; ++k) {
    const double p = momentum_of_bin(k, n, dx);
    const double w = std::norm(spectrum(k)) * weight;
    mean_p += w * p;
    mean_p2 += w * p * p;
  }
  mean_p /= n2;
  mean_p2 /= n2;

  // <QP> from (P xi)(x); <{Q,P}> = 2 Re <QP>.
  Vector p_spectrum = spectrum;
  for (int k = 0; k < n; ++k) p_spectrum(k) *= momentum_of_bin(k, n, dx);
  const Vector p_xi = fft_inverse(p_spectrum);
  Complex qp = 0.0;
  for (int k = 0; k < n; ++k) {
    qp += std::conj(xi.amps()(k)) * xi.x(k) * p_xi(k) * dx;
  }
  const double anticom = 2.0 * (qp / n2).real();

  ProbeMoments m;
  m.mean_q = mean_q;
  m.mean_p = mean_p;
  m.var_q = mean_q2 - mean_q * mean_q;
  m.var_p = mean_p2 - mean_p * mean_p;
  m.d_var_q_dt = (anticom - 2.0 * mean_q * mean_p) / xi.mass();
  if (m.var_q * m.var_p < 0.25 - 1e-9) {
    throw SimError(Guard::GridResolution,
                   "uncertainty product below 1/4; grid under-resolved");
  }
  return m;
}

ProbeGrid translate(const ProbeGrid& xi, double shift) {
  if (shift == 0.0) return xi;
  Vector spectrum = fft_forward(xi.amps());
  const int n = xi.n_points();
  for (int k = 0; k < n; ++k) {
    const double p = momentum_of_bin(k, n, xi.dx());
    spectrum(k) *= std::exp(Complex(0.0, -p * shift));
  }
  return xi.with_amps(fft_inverse(spectrum));
}

ProbeGrid free_evolve(const ProbeGrid& xi, double time) {
  if (time == 0.0) return xi;
  Vector spectrum = fft_forward(xi.amps());
  const int n = xi.n_points();
  for (int k = 0; k < n; ++k) {
    const double p = momentum_of_bin(k, n, xi.dx());
    spectrum(k) *= std::exp(Complex(0.0, -time * p * p / (2.0 * xi.mass())));
  }
  return xi.with_amps(fft_inverse(spectrum));
}

VonNeumannResult exact_von_neumann(const PrePostSelection& sel, const QOperator& a,
                                   const ProbeGrid& xi, double g) {
  require_same_dim(sel.dim(), a.dim(), "selection vs observable");
  Eigensystem eig = eigendecompose_hermitian(a);

  const double window = xi.x_max() - xi.x_min();
  const double max_shift =
      std::abs(g) * eig.eigenvalues.cwiseAbs().maxCoeff();
  if (max_shift > window / 4.0) {
    throw SimError(Guard::GridWindow,
                   "branch shift " + std::to_string(max_shift) +
                       " exceeds a quarter of the window");
  }

  const Vector forward = sel.u_before().matrix() * sel.pre().amps();
  const Vector backward = sel.u_after().matrix().adjoint() * sel.post().amps();

  Vector out = Vector::Zero(xi.n_points());
  for (int j = 0; j < a.dim(); ++j) {
    const Complex amp =
        backward.dot(eig.eigenvectors.col(j)) * eig.eigenvectors.col(j).dot(forward);
    if (amp == Complex(0.0, 0.0)) continue;
    out += amp * translate(xi, g * eig.eigenvalues(j)).amps();
  }

  ProbeGrid probe = xi.with_amps(std::move(out));
  const double peak = probe.amps().cwiseAbs().maxCoeff();
  if (peak > 0.0) {
    if (std::abs(probe.amps()(0)) > 1e-6 * peak ||
        std::abs(probe.amps()(xi.n_points() - 1)) > 1e-6 * peak) {
      throw SimError(Guard::GridWindow,
                     "conditional probe state reaches the window edge");
    }
  }
  return VonNeumannResult{probe, probe.squared_norm()};
}

ProbeGrid projector_full_order_probe(const PrePostSelection& sel,
                                     const QOperator& a, const ProbeGrid& xi,
                                     double g, double overlap_floor) {
  if (max_abs(a.matrix() * a.matrix() - a.matrix()) > kConstructTol) {
    throw SimError(Guard::NonProjector, "full-order route requires A^2 = A");
  }
  const WeakValue w = weak_value(sel, a, overlap_floor);
  const Vector base = xi.amps();
  const Vector shifted = translate(xi, g).amps();
  Vector out = w.overlap * ((1.0 - w.value) * base + w.value * shifted);
  return xi.with_amps(std::move(out));
}

ProbeShifts first_order_shifts(Complex weak_val, const ProbeGrid& xi, double g) {
  const ProbeMoments m = probe_moments(xi);
  ProbeShifts s;
  s.dq = g * weak_val.real() + xi.mass() * g * weak_val.imag() * m.d_var_q_dt;
  s.dp = 2.0 * g * weak_val.imag() * m.var_p;
  return s;
}

ProbeShifts measured_shifts(const ProbeGrid& before, const ProbeGrid& after) {
  const ProbeMoments m0 = probe_moments(before);
  const ProbeMoments m1 = probe_moments(after);
  return ProbeShifts{m1.mean_q - m0.mean_q, m1.mean_p - m0.mean_p};
}

double fit_log_order(const std::vector<double>& g, const std::vector<double>& err,
                     double noise_floor) {
  std::vector<double> lg, le;
  for (size_t k = 0; k < g.size(); ++k) {
    if (err[k] > noise_floor) {
      lg.push_back(std::log(g[k]));
      le.push_back(std::log(err[k]));
    }
  }
  if (lg.size() < 2) return std::numeric_limits<double>::infinity();
  double mg = 0, me = 0;
  for (size_t k = 0; k < lg.size(); ++k) {
    mg += lg[k];
    me += le[k];
  }
  mg /= lg.size();
  me /= le.size();
  double num = 0, den = 0;
  for (size_t k = 0; k < lg.size(); ++k) {
    num += (lg[k] - mg) * (le[k] - me);
    den += (lg[k] - mg) * (lg[k] - mg);
  }
  return num / den;
}

WeakLimitReport verify_weak_limit(const PrePostSelection& sel, const QOperator& a,
                                  const ProbeGrid& xi,
                                  const std::vector<double>& g_list) {
  if (g_list.size() < 2) {
    throw SimError(Guard::InvalidArgument, "need at least two g values");
  }
  WeakLimitReport report;
  report.weak_val = weak_value(sel, a).value;

  const ProbeMoments m0 = probe_moments(xi);
  report.formula_coeff_q =
      report.weak_val.real() + xi.mass() * report.weak_val.imag() * m0.d_var_q_dt;
  report.formula_coeff_p = 2.0 * report.weak_val.imag() * m0.var_p;

  for (double g : g_list) {
    const VonNeumannResult res = exact_von_neumann(sel, a, xi, g);
    const ProbeShifts exact = measured_shifts(xi, res.probe);
    const ProbeShifts formula = first_order_shifts(report.weak_val, xi, g);
    WeakLimitPoint p;
    p.g = g;
    p.dq_exact = exact.dq;
    p.dp_exact = exact.dp;
    p.dq_formula = formula.dq;
    p.dp_formula = formula.dp;
    p.err_q = std::abs(exact.dq - formula.dq);
    p.err_p = std::abs(exact.dp - formula.dp);
    report.points.push_back(p);
  }

  std::vector<double> gs, eq, ep;
  for (const WeakLimitPoint& p : report.points) {
    gs.push_back(p.g);
    eq.push_back(p.err_q);
    ep.push_back(p.err_p);
  }
  report.order_q = fit_log_order(gs, eq);
  report.order_p = fit_log_order(gs, ep);

  // Delta/g = c + b g + O(g^2); eliminate b with the two smallest g.
  size_t i1 = 0, i2 = 0;
  for (size_t k = 1; k < g_list.size(); ++k) {
    if (std::abs(g_list[k]) < std::abs(g_list[i1])) i1 = k;
  }
  i2 = (i1 == 0) ? 1 : 0;
  for (size_t k = 0; k < g_list.size(); ++k) {
    if (k != i1 && std::abs(g_list[k]) < std::abs(g_list[i2])) i2 = k;
  }
  const double g1 = report.points[i2].g;  // larger
  const double g2 = report.points[i1].g;  // smaller
  const double rq1 = report.points[i2].dq_exact / g1;
  const double rq2 = report.points[i1].dq_exact / g2;
  const double rp1 = report.points[i2].dp_exact / g1;
  const double rp2 = report.points[i1].dp_exact / g2;
  report.coeff_q = (rq2 * g1 - rq1 * g2) / (g1 - g2);
  report.coeff_p = (rp2 * g1 - rp1 * g2) / (g1 - g2);
  return report;
}

}  // namespace wvsim
