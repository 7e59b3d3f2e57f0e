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

// Empirical risk estimators and the sampled CVaR auxiliary function
//
//   H(S, tau) = tau - 1/(n_s alpha) * sum_k (tau - f(S, y_k))_+ .
//
// Tail convention: the alpha-tail of n samples is exactly the ceil(alpha n)
// smallest order statistics, even under ties. VaR is the largest of them and
// CVaR their mean. This differs from the measure-theoretic conditional
// expectation only on atoms, and the gap vanishes as n grows.

#ifndef CVARSEL_RISK_H_
#define CVARSEL_RISK_H_

#include <cstddef>
#include <optional>
#include <span>

#include <Eigen/Dense>

#include "cvarsel/ground_set.h"
#include "cvarsel/scenario_table.h"

namespace cvarsel {

struct RiskParams {
  double alpha = 1.0;       // risk level, (0, 1]
  double gamma_cap = 1.0;   // upper bound on tau
  double delta_step = 1.0;  // tau grid separation, (0, gamma_cap]
  // Sample-sizing accuracy/confidence; both set or both unset.
  std::optional<double> epsilon;
  std::optional<double> delta_conf;

  // Throws ParameterError when any invariant fails.
  void validate() const;
};

struct CvarEstimate {
  double var = 0.0;
  double cvar = 0.0;
  std::size_t tail_count = 0;
};

// Number of samples in the alpha-tail: ceil(alpha n), clamped to [1, n].
std::size_t tail_count(std::size_t n, double alpha);

double estimate_var(std::span<const double> values, double alpha);
CvarEstimate estimate_cvar(std::span<const double> values, double alpha);

// H from a vector of per-scenario utilities. Sums the hinge terms in
// ascending scenario order. `weights` empty means equally likely scenarios.
double auxiliary_h(const Eigen::VectorXd& utilities, double tau, double alpha,
                   const Eigen::VectorXd& weights = {});

double auxiliary_h(const ElementSet& s, double tau, const ScenarioTable& table,
                   double alpha);

// H(empty, tau) = tau (1 - 1/alpha), evaluated through the same formula.
double auxiliary_h_empty(double tau, double alpha, const ScenarioTable& table);

// Smallest n with 1 - 2 exp(-2 n eps^2 / Gamma^2) >= 1 - delta, i.e.
// ceil(Gamma^2 / (2 eps^2) * ln(2 / delta)).
std::size_t required_samples(double gamma_cap, double epsilon,
                             double delta_conf);

}  // namespace cvarsel

#endif  // CVARSEL_RISK_H_
