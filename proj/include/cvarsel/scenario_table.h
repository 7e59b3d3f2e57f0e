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

#ifndef CVARSEL_SCENARIO_TABLE_H_
#define CVARSEL_SCENARIO_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>

#include <Eigen/Dense>

#include "cvarsel/ground_set.h"

namespace cvarsel {

class ScenarioTable;

// Per-scenario utilities of a set that grows one element at a time. Lets a
// table answer f(S + e, .) without re-evaluating S from scratch.
class ScenarioGrowth {
 public:
  virtual ~ScenarioGrowth() = default;

  const ElementSet& set() const { return set_; }
  const Eigen::VectorXd& values() const { return values_; }

  // out <- f(S + {e}, k) for every scenario k.
  virtual void extended(ElementId e, Eigen::VectorXd& out) const = 0;
  virtual void add(ElementId e) = 0;

 protected:
  ElementSet set_;
  Eigen::VectorXd values_;
};

// A fixed collection of n_s realizations of the random input y. Evaluating
// a set returns the vector (f(S, y_k))_k in scenario order. Scenarios are
// equally likely unless weights() is non-empty, in which case weights()[k]
// is the probability of scenario k (exact-expectation mode).
//
// Utilities must be normalized (f(empty) = 0), finite and >= 0.
class ScenarioTable {
 public:
  virtual ~ScenarioTable() = default;

  virtual std::size_t element_count() const = 0;
  virtual std::size_t scenario_count() const = 0;
  virtual std::uint64_t seed() const = 0;
  virtual const Eigen::VectorXd& weights() const;
  bool uniform_weights() const { return weights().size() == 0; }

  virtual Eigen::VectorXd values(std::span<const ElementId> s) const = 0;
  Eigen::VectorXd values(const ElementSet& s) const { return values(s.view()); }
  double value(const ElementSet& s, std::size_t scenario) const;

  // Mean utility over scenarios (probability-weighted in exact mode),
  // summed in ascending scenario order.
  double mean_value(std::span<const ElementId> s) const;

  // Default growth re-evaluates the extended set on every call.
  virtual std::unique_ptr<ScenarioGrowth> grow() const;
};

// Table backed by a point-wise callback f(S, k). Intended for tests and
// small hand-built instances.
class FunctionTable : public ScenarioTable {
 public:
  using PointFn = std::function<double(std::span<const ElementId>, std::size_t)>;

  FunctionTable(std::size_t elements, std::size_t scenarios, std::uint64_t seed,
                PointFn fn, Eigen::VectorXd weights = {});

  std::size_t element_count() const override { return elements_; }
  std::size_t scenario_count() const override { return scenarios_; }
  std::uint64_t seed() const override { return seed_; }
  const Eigen::VectorXd& weights() const override { return weights_; }
  Eigen::VectorXd values(std::span<const ElementId> s) const override;

 private:
  std::size_t elements_;
  std::size_t scenarios_;
  std::uint64_t seed_;
  PointFn fn_;
  Eigen::VectorXd weights_;
};

// Checks weights: non-negative, one per scenario, summing to 1 within 1e-12.
void validate_weights(const Eigen::VectorXd& w, std::size_t scenarios);

}  // namespace cvarsel

#endif  // CVARSEL_SCENARIO_TABLE_H_
