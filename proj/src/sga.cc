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

#include "cvarsel/sga.h"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>
#include <thread>

#include "cvarsel/errors.h"
#include "cvarsel/greedy.h"

namespace cvarsel {
namespace {

// Marginal gains of H(., tau) over a growing set.
class AuxiliaryOracle {
 public:
  AuxiliaryOracle(const ScenarioTable& table, double tau, double alpha)
      : tau_(tau),
        alpha_(alpha),
        weights_(table.weights()),
        growth_(table.grow()),
        base_(auxiliary_h_empty(tau, alpha, table)) {}

  double gain(ElementId e) {
    growth_->extended(e, scratch_);
    return auxiliary_h(scratch_, tau_, alpha_, weights_) - base_;
  }

  void commit(ElementId e) {
    growth_->add(e);
    base_ = auxiliary_h(growth_->values(), tau_, alpha_, weights_);
  }

  double value() const { return base_; }

 private:
  double tau_;
  double alpha_;
  const Eigen::VectorXd& weights_;
  std::unique_ptr<ScenarioGrowth> growth_;
  double base_;
  Eigen::VectorXd scratch_;
};

struct GridPointResult {
  SgaTraceEntry entry;
  std::size_t evals = 0;
};

GridPointResult solve_grid_point(const ScenarioTable& table, const Matroid& m,
                                 const GroundSet& x, double tau, double alpha) {
  AuxiliaryOracle oracle(table, tau, alpha);
  GreedyResult g = greedy_maximize(oracle, m, x);
  return {SgaTraceEntry{tau, std::move(g.selected), oracle.value()},
          g.eval_count};
}

}  // namespace

std::size_t grid_steps(const RiskParams& p) {
  const double ratio = p.gamma_cap / p.delta_step;
  const double steps = std::ceil(ratio - 1e-12 * std::max(1.0, ratio));
  return static_cast<std::size_t>(std::max(1.0, steps));
}

std::vector<double> tau_grid(const RiskParams& p) {
  p.validate();
  const std::size_t steps = grid_steps(p);
  std::vector<double> grid(steps + 1);
  for (std::size_t i = 0; i <= steps; ++i) {
    grid[i] = static_cast<double>(i) * p.delta_step;
  }
  return grid;
}

SgaResult sga_solve(const ScenarioTable& table, const Matroid& m,
                    const GroundSet& x, const RiskParams& p,
                    const SgaOptions& options) {
  p.validate();
  if (table.element_count() != x.size() || m.ground_size() != x.size()) {
    throw ParameterError("scenario table, matroid and ground set disagree on |X|");
  }
  const std::vector<double> grid = tau_grid(p);
  std::vector<GridPointResult> points(grid.size());

  auto run_range = [&](std::size_t begin, std::size_t stride) {
    for (std::size_t i = begin; i < grid.size(); i += stride) {
      try {
        points[i] = solve_grid_point(table, m, x, grid[i], p.alpha);
      } catch (const Error& e) {
        throw Error("sga: tau_" + std::to_string(i) + " = " +
                    std::to_string(grid[i]) + ": " + e.what());
      }
    }
  };

  const unsigned threads =
      std::max(1u, std::min<unsigned>(options.threads,
                                      static_cast<unsigned>(grid.size())));
  if (threads == 1) {
    run_range(0, 1);
  } else {
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          run_range(t, threads);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
    for (auto& th : pool) th.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  SgaResult r;
  r.trace.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    r.eval_count += points[i].evals;
    if (i == 0 || points[i].entry.h > r.h_value) {
      r.h_value = points[i].entry.h;
      r.best_index = i;
    }
    r.trace.push_back(std::move(points[i].entry));
  }
  r.selected = r.trace[r.best_index].set;
  r.tau_g = r.trace[r.best_index].tau;
  return r;
}

double additive_term(double k_f, double gamma_cap, double alpha) {
  return k_f / (1.0 + k_f) * gamma_cap * (1.0 / alpha - 1.0);
}

Certificate certificate(const SgaResult& result, double k_f,
                        const RiskParams& p) {
  // Delta = 0 is allowed here to state the limiting bound.
  if (!(p.alpha > 0.0 && p.alpha <= 1.0) || !(p.gamma_cap > 0.0) ||
      !(p.delta_step >= 0.0) || p.epsilon.value_or(0.0) < 0.0) {
    throw ParameterError("certificate: invalid risk parameters");
  }
  if (!(k_f >= 0.0 && k_f <= 1.0)) {
    throw ParameterError("curvature k_f must lie in [0, 1], got " +
                         std::to_string(k_f));
  }
  Certificate c;
  c.k_f = k_f;
  c.alpha = p.alpha;
  c.gamma_cap = p.gamma_cap;
  c.delta_step = p.delta_step;
  c.epsilon = p.epsilon.value_or(0.0);
  c.additive_term = additive_term(k_f, p.gamma_cap, p.alpha);
  c.optimum_upper_bound = (1.0 + k_f) * result.h_value +
                          k_f * p.gamma_cap * (1.0 / p.alpha - 1.0) +
                          p.delta_step + (1.0 + k_f) * c.epsilon;
  return c;
}

std::uint64_t eval_count_bound(const GroundSet& x, const RiskParams& p,
                               std::size_t n_s) {
  p.validate();
  const std::uint64_t points = grid_steps(p) + 1;
  const std::uint64_t n = x.size();
  return points * n * n * static_cast<std::uint64_t>(n_s);
}

Curvature mean_utility_curvature(const ScenarioTable& table,
                                 const GroundSet& x) {
  return curvature_estimate(
      [&](const ElementSet& s) { return table.mean_value(s.view()); }, x);
}

Curvature auxiliary_curvature(const ScenarioTable& table, const GroundSet& x,
                              double tau, double alpha) {
  const double empty = auxiliary_h_empty(tau, alpha, table);
  return curvature_estimate(
      [&](const ElementSet& s) {
        return auxiliary_h(s, tau, table, alpha) - empty;
      },
      x);
}

}  // namespace cvarsel
