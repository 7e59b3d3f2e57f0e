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

#include "cvarsel/risk.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cvarsel/errors.h"

namespace cvarsel {
namespace {

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("alpha must lie in (0, 1], got " +
                         std::to_string(alpha));
  }
}

std::vector<double> sorted_copy(std::span<const double> values) {
  if (values.empty()) throw EmptyInputError("risk estimate of an empty sample");
  std::vector<double> v(values.begin(), values.end());
  std::sort(v.begin(), v.end());
  return v;
}

}  // namespace

void RiskParams::validate() const {
  check_alpha(alpha);
  if (!(gamma_cap > 0.0) || !std::isfinite(gamma_cap)) {
    throw ParameterError("gamma_cap must be positive and finite");
  }
  if (!(delta_step > 0.0 && delta_step <= gamma_cap)) {
    throw ParameterError("delta_step must lie in (0, gamma_cap]");
  }
  if (epsilon.has_value() != delta_conf.has_value()) {
    throw ParameterError("epsilon and delta_conf must be given together");
  }
  if (epsilon && !(*epsilon > 0.0 && *epsilon < 1.0)) {
    throw ParameterError("epsilon must lie in (0, 1)");
  }
  if (delta_conf && !(*delta_conf > 0.0 && *delta_conf < 1.0)) {
    throw ParameterError("delta_conf must lie in (0, 1)");
  }
}

std::size_t tail_count(std::size_t n, double alpha) {
  check_alpha(alpha);
  const double x = alpha * static_cast<double>(n);
  // Guard against alpha * n landing one ulp above an integer.
  auto k = static_cast<std::size_t>(std::ceil(x - 1e-12 * std::max(1.0, x)));
  return std::clamp<std::size_t>(k, 1, n);
}

double estimate_var(std::span<const double> values, double alpha) {
  check_alpha(alpha);
  const std::vector<double> v = sorted_copy(values);
  return v[tail_count(v.size(), alpha) - 1];
}

CvarEstimate estimate_cvar(std::span<const double> values, double alpha) {
  check_alpha(alpha);
  const std::vector<double> v = sorted_copy(values);
  CvarEstimate out;
  out.tail_count = tail_count(v.size(), alpha);
  double sum = 0.0;
  if (out.tail_count == v.size()) {
    // Whole sample: input order, so the result is the plain mean.
    for (double x : values) sum += x;
  } else {
    for (std::size_t i = 0; i < out.tail_count; ++i) sum += v[i];
  }
  out.var = v[out.tail_count - 1];
  out.cvar = sum / static_cast<double>(out.tail_count);
  // The mean of the k smallest values can exceed the k-th by rounding.
  out.cvar = std::min(out.cvar, out.var);
  return out;
}

double auxiliary_h(const Eigen::VectorXd& utilities, double tau, double alpha,
                   const Eigen::VectorXd& weights) {
  const Eigen::Index n = utilities.size();
  if (n == 0) throw EmptyInputError("auxiliary function of an empty table");
  double hinge = 0.0;
  if (weights.size() == 0) {
    for (Eigen::Index k = 0; k < n; ++k) {
      hinge += std::max(tau - utilities[k], 0.0);
    }
    return tau - hinge / (static_cast<double>(n) * alpha);
  }
  for (Eigen::Index k = 0; k < n; ++k) {
    hinge += weights[k] * std::max(tau - utilities[k], 0.0);
  }
  return tau - hinge / alpha;
}

double auxiliary_h(const ElementSet& s, double tau, const ScenarioTable& table,
                   double alpha) {
  return auxiliary_h(table.values(s), tau, alpha, table.weights());
}

double auxiliary_h_empty(double tau, double alpha, const ScenarioTable& table) {
  const Eigen::VectorXd zeros =
      Eigen::VectorXd::Zero(static_cast<Eigen::Index>(table.scenario_count()));
  return auxiliary_h(zeros, tau, alpha, table.weights());
}

std::size_t required_samples(double gamma_cap, double epsilon,
                             double delta_conf) {
  if (!(gamma_cap > 0.0) || !(epsilon > 0.0) || !(delta_conf > 0.0)) {
    throw ParameterError("required_samples: arguments must be positive");
  }
  if (!(delta_conf < 1.0)) {
    throw ParameterError("required_samples: delta_conf must be < 1");
  }
  const double x = gamma_cap * gamma_cap / (2.0 * epsilon * epsilon) *
                   std::log(2.0 / delta_conf);
  const double n = std::ceil(x - 1e-12 * std::max(1.0, x));
  return static_cast<std::size_t>(std::max(1.0, n));
}

}  // namespace cvarsel
