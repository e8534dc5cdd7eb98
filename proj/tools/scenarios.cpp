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

#include "scenarios.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <thread>

#include "wvsim/decoherence.hpp"
#include "wvsim/probe.hpp"
#include "wvsim/protective.hpp"
#include "wvsim/qubit.hpp"
#include "wvsim/two_state.hpp"
#include "wvsim/weak_values.hpp"

namespace wvsim::cli {

namespace {

void require_sweep_parameter(const RunConfig& config, const char* expected) {
  if (config.sweep_parameter != expected) {
    throw ConfigError(std::string("scenario '") + scenario_name(config.scenario) +
                      "' sweeps '" + expected + "', got '" +
                      config.sweep_parameter + "'");
  }
}

PrePostSelection selection_from(const RunConfig& config) {
  if (!config.states.pre || !config.states.post) {
    throw ConfigError("scenario needs [states] pre and post");
  }
  QState pre{*config.states.pre};
  QState post{*config.states.post};
  const int d = pre.dim();
  QOperator u_before = config.states.u_before
                           ? QOperator::unitary(*config.states.u_before)
                           : QOperator::identity(d);
  QOperator u_after = config.states.u_after
                          ? QOperator::unitary(*config.states.u_after)
                          : QOperator::identity(d);
  return PrePostSelection(std::move(pre), std::move(post), std::move(u_before),
                          std::move(u_after));
}

QOperator observable_from(const RunConfig& config) {
  if (!config.observable) {
    throw ConfigError("scenario needs [observable] matrix");
  }
  return QOperator::hermitian(*config.observable);
}

GridSpec grid_from(const RunConfig& config) {
  GridSpec spec;
  spec.n_points = config.grid.n_points;
  spec.mass = config.grid.mass;
  if (config.grid.window_given) {
    spec.x_min = config.grid.x_min;
    spec.x_max = config.grid.x_max;
  } else {
    spec.x_min = config.grid.center - 20.0 * config.grid.width;
    spec.x_max = config.grid.center + 20.0 * config.grid.width;
  }
  return spec;
}

int basis_index_from_sweep(double value, int dim, const char* what) {
  const double rounded = std::round(value);
  if (std::abs(value - rounded) > 1e-9 || rounded < 1 || rounded > dim) {
    throw ConfigError(std::string(what) + " sweep values must be integers in [1, " +
                      std::to_string(dim) + "]");
  }
  return static_cast<int>(rounded) - 1;  // 1-based in configs
}

QOperator basis_projector(int dim, int index) {
  Matrix p = Matrix::Zero(dim, dim);
  p(index, index) = 1.0;
  return QOperator::projector(std::move(p));
}

// One row per swept value; columns fixed per scenario.

std::vector<double> row_weak_value(const RunConfig& config, double value) {
  const PrePostSelection sel = selection_from(config);
  const int box = basis_index_from_sweep(value, sel.dim(), "projector");
  const WeakValue w =
      weak_value(sel, basis_projector(sel.dim(), box), config.overlap_floor);
  return {static_cast<double>(box + 1), w.value.real(), w.value.imag(),
          std::abs(w.value), w.overlap.real(), w.overlap.imag()};
}

std::vector<double> row_abl(const RunConfig& config, double value) {
  const PrePostSelection sel = selection_from(config);
  const int box = basis_index_from_sweep(value, sel.dim(), "box");
  const AblDistribution abl =
      abl_probabilities(sel, basis_projector(sel.dim(), box));
  // Ascending eigenvalues: the projector outcome 1 ("in the box") is last.
  const double pr_in = abl.probabilities.back();
  const double pr_out = abl.probabilities.size() > 1 ? abl.probabilities.front() : 0.0;
  return {static_cast<double>(box + 1), pr_in, pr_out};
}

std::vector<double> row_probe_sweep(const RunConfig& config, double g) {
  const PrePostSelection sel = selection_from(config);
  const QOperator a = observable_from(config);
  const ProbeGrid xi =
      gaussian_probe(config.grid.center, config.grid.width, grid_from(config));
  const WeakValue w = weak_value(sel, a, config.overlap_floor);
  const VonNeumannResult res = exact_von_neumann(sel, a, xi, g);
  const ProbeShifts exact = measured_shifts(xi, res.probe);
  const ProbeShifts formula = first_order_shifts(w.value, xi, g);
  return {g,          exact.dq,   exact.dp,        formula.dq,
          formula.dp, exact.dq / g, res.success_prob};
}

std::vector<double> row_qubit_probe(const RunConfig& config, double g) {
  const QubitConfig& q = config.qubit;
  QOperator a = config.observable ? QOperator::hermitian(*config.observable)
                                  : pauli_z();
  const QubitShiftResult r =
      qubit_probe_shift(BlochVector(q.r_i), BlochVector(q.r_f), BlochVector(q.m),
                        q.v, q.q, a, g, config.overlap_floor);
  return {g,
          r.formula,
          r.exact,
          r.weak_val.real(),
          r.weak_val.imag(),
          std::abs(r.exact - r.formula)};
}

std::vector<double> row_cnot(const RunConfig& config, double eps) {
  if (!(std::abs(eps) < 0.5)) {
    throw ConfigError("cnot-sweep epsilon values must lie in (-0.5, 0.5)");
  }
  const PrePostSelection sel = selection_from(config);
  if (sel.dim() != 2) throw ConfigError("cnot-sweep needs qubit states");
  const double gamma_p = std::sqrt(0.5 + eps);
  const double eta_p = std::sqrt(0.5 - eps);
  const CnotReadout r =
      cnot_readout(sel.pre().amp(0), sel.pre().amp(1), gamma_p, eta_p,
                   sel.post(), config.cnot.outcome);
  return {eps, gamma_p, eta_p, r.prob, r.prob_circuit, r.r};
}

std::vector<double> row_protective(const RunConfig& config, double value) {
  const double n_steps_d = std::round(value);
  if (std::abs(value - n_steps_d) > 1e-9 || n_steps_d < 1) {
    throw ConfigError("protective n_steps sweep values must be positive integers");
  }
  const int n_steps = static_cast<int>(n_steps_d);
  const ProtectiveConfig& p = config.protective;
  const double omega = p.theta_max / p.total_time;
  auto h_s = [&](double t) {
    Matrix h(2, 2);
    const double c = std::cos(omega * t);
    const double s = std::sin(omega * t);
    h << p.e0 * c, p.e0 * s, p.e0 * s, -p.e0 * c;
    return h;
  };
  auto g_profile = [&](double) { return p.g0 / p.total_time; };
  const ProbeGrid xi =
      gaussian_probe(config.grid.center, config.grid.width, grid_from(config));
  const ProtectiveResult res =
      protective_measurement(h_s, g_profile, xi, pauli_z(), p.total_time,
                             p.eigenstate_index, n_steps);
  // Instantaneous <sigma_z> in eigenstate 1 (0) is +cos(w t) (-cos(w t)).
  const double sign = (p.eigenstate_index == 1) ? 1.0 : -1.0;
  const double adiabatic =
      sign * (p.g0 / p.total_time) *
      (std::sin(omega * p.total_time) / omega);
  return {static_cast<double>(n_steps), res.dq, adiabatic, res.target_fidelity};
}

EnvironmentModel environment_from(const RunConfig& config) {
  const DecoherenceConfig& d = config.decoherence;
  if (!d.h0 || !d.h1 || !d.e_i || !d.e_f) {
    throw ConfigError("decoherence scenario needs [decoherence] h0, h1, e_i, e_f");
  }
  QState env_init{*d.e_i};
  return EnvironmentModel(QOperator::hermitian(*d.h0), QOperator::hermitian(*d.h1),
                          env_init, QState{*d.e_f},
                          computational_basis(env_init.dim()), d.t_i, d.t_0,
                          d.t_f);
}

std::vector<double> row_decoherence(const RunConfig& config, double g) {
  const EnvironmentModel env = environment_from(config);
  if (!config.states.pre || !config.states.post) {
    throw ConfigError("decoherence scenario needs [states] pre and post");
  }
  const QState pre{*config.states.pre};
  const QState post{*config.states.post};
  const QOperator a = observable_from(config);
  const ProbeGrid xi =
      gaussian_probe(config.grid.center, config.grid.width, grid_from(config));
  DecoherentShiftOptions options;
  options.slicing.slices = config.decoherence.slices;
  options.overlap_floor = config.overlap_floor;
  const DecoherentShifts s =
      decoherent_probe_shifts(env, pre, post, a, xi, g, options);
  return {g,
          s.weak_val.real(),
          s.weak_val.imag(),
          s.dq,
          s.dp,
          s.oracle_dq,
          s.oracle_dp,
          s.success_prob};
}

struct ScenarioSpec {
  const char* sweep_parameter;
  std::vector<std::string> columns;
  std::vector<double> (*row)(const RunConfig&, double);
};

ScenarioSpec scenario_spec(Scenario s) {
  switch (s) {
    case Scenario::WeakValue:
      return {"projector",
              {"projector", "w_re", "w_im", "w_abs", "overlap_re", "overlap_im"},
              row_weak_value};
    case Scenario::Abl:
      return {"box", {"box", "pr_in", "pr_out"}, row_abl};
    case Scenario::ProbeSweep:
      return {"g",
              {"g", "dq_exact", "dp_exact", "dq_formula", "dp_formula",
               "dq_over_g", "success_prob"},
              row_probe_sweep};
    case Scenario::QubitProbe:
      return {"g",
              {"g", "shift_formula", "shift_exact", "wv_re", "wv_im", "residual"},
              row_qubit_probe};
    case Scenario::CnotSweep:
      return {"epsilon",
              {"epsilon", "gamma", "eta", "prob", "prob_circuit", "readout_r"},
              row_cnot};
    case Scenario::Protective:
      return {"n_steps",
              {"n_steps", "dq", "dq_adiabatic", "fidelity"},
              row_protective};
    case Scenario::Decoherence:
      return {"g",
              {"g", "wv_re", "wv_im", "dq_formula", "dp_formula", "dq_oracle",
               "dp_oracle", "success_prob"},
              row_decoherence};
  }
  throw ConfigError("unhandled scenario");
}

}  // namespace

ResultTable run_scenario(const RunConfig& config, int workers) {
  const ScenarioSpec spec = scenario_spec(config.scenario);
  require_sweep_parameter(config, spec.sweep_parameter);

  const size_t n = config.sweep_values.size();
  std::vector<std::vector<double>> rows(n);
  std::vector<std::exception_ptr> errors(n);

  int pool = workers;
  if (pool <= 0) {
    pool = static_cast<int>(std::thread::hardware_concurrency());
    if (pool <= 0) pool = 1;
  }
  pool = std::min<int>(pool, static_cast<int>(n));

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    while (true) {
      const size_t index = next.fetch_add(1);
      if (index >= n) return;
      try {
        rows[index] = spec.row(config, config.sweep_values[index]);
      } catch (...) {
        errors[index] = std::current_exception();
      }
    }
  };
  if (pool <= 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(pool);
    for (int t = 0; t < pool; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);  // first failing sweep point wins
  }

  ResultTable table;
  table.columns = spec.columns;
  table.rows = std::move(rows);
  char hash_hex[20];
  std::snprintf(hash_hex, sizeof(hash_hex), "%016llx",
                static_cast<unsigned long long>(config.config_hash));
  table.metadata = {
      {"wvsim_version", "0.1.0"},
      {"scenario", scenario_name(config.scenario)},
      {"sweep_parameter", config.sweep_parameter},
      {"config_hash", hash_hex},
      {"seed", std::to_string(config.seed)},
  };
  return table;
}

}  // namespace wvsim::cli
