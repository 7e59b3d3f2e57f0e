// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Sequential Greedy Algorithm for CVaR maximization under a matroid.
//
// For every grid point tau_i = i * Delta, i = 0 .. ceil(Gamma / Delta), the
// matroid greedy is run on S -> H(S, tau_i) over one shared scenario table,
// and the (set, tau) pair with the largest H is returned. The full per-tau
// trace is kept.

#ifndef CVARSEL_SGA_H_
#define CVARSEL_SGA_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "cvarsel/curvature.h"
#include "cvarsel/ground_set.h"
#include "cvarsel/matroid.h"
#include "cvarsel/risk.h"
#include "cvarsel/scenario_table.h"

namespace cvarsel {

struct SgaTraceEntry {
  double tau = 0.0;
  ElementSet set;
  double h = 0.0;
};

struct SgaResult {
  ElementSet selected;
  double tau_g = 0.0;
  double h_value = 0.0;
  std::size_t best_index = 0;
  std::vector<SgaTraceEntry> trace;
  // Set evaluations against the scenario table; each covers all n_s
  // scenarios. H(empty, tau) is closed-form and not counted.
  std::size_t eval_count = 0;
};

struct Certificate {
  double k_f = 0.0;
  double additive_term = 0.0;
  double delta_step = 0.0;
  double epsilon = 0.0;
  double gamma_cap = 0.0;
  double alpha = 1.0;
  // (1 + k_f) H_G + k_f Gamma (1/alpha - 1) + Delta + (1 + k_f) eps, an upper
  // bound on the optimum H(S*, tau*).
  double optimum_upper_bound = 0.0;
};

struct SgaOptions {
  // Grid points are independent; > 1 splits them across threads. Output is
  // identical for every thread count.
  unsigned threads = 1;
};

// ceil(Gamma / Delta), robust to Gamma / Delta landing one ulp above an
// integer.
std::size_t grid_steps(const RiskParams& p);
// tau_i = i * Delta for i = 0 .. grid_steps(p); the last point may exceed
// Gamma when Gamma / Delta is fractional.
std::vector<double> tau_grid(const RiskParams& p);

SgaResult sga_solve(const ScenarioTable& table, const Matroid& m,
                    const GroundSet& x, const RiskParams& p,
                    const SgaOptions& options = {});

// H_add = k_f / (1 + k_f) * Gamma * (1/alpha - 1).
double additive_term(double k_f, double gamma_cap, double alpha);

// Uses p.epsilon when set (sampled mode), 0 otherwise (exact mode). Accepts
// delta_step = 0. Throws ParameterError for k_f outside [0, 1].
Certificate certificate(const SgaResult& result, double k_f,
                        const RiskParams& p);

// (ceil(Gamma / Delta) + 1) |X|^2 n_s: the operation count of a full SGA
// run, counting every tau grid point. result.eval_count * n_s never
// exceeds it.
std::uint64_t eval_count_bound(const GroundSet& x, const RiskParams& p,
                               std::size_t n_s);

// Curvature of the mean-scenario utility S -> E_k f(S, y_k), the k_f used
// by certificates.
Curvature mean_utility_curvature(const ScenarioTable& table,
                                 const GroundSet& x);

// Curvature of the normalized auxiliary function S -> H(S, tau) - H(empty,
// tau) at one tau. Diagnostic only; throws ZeroSingletonError at tau = 0.
Curvature auxiliary_curvature(const ScenarioTable& table, const GroundSet& x,
                              double tau, double alpha);

}  // namespace cvarsel

#endif  // CVARSEL_SGA_H_
