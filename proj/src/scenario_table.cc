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

#include "cvarsel/scenario_table.h"

#include <cmath>
#include <string>

#include "cvarsel/errors.h"

namespace cvarsel {
namespace {

class RecomputingGrowth : public ScenarioGrowth {
 public:
  explicit RecomputingGrowth(const ScenarioTable& table) : table_(table) {
    values_ = Eigen::VectorXd::Zero(table.scenario_count());
  }

  void extended(ElementId e, Eigen::VectorXd& out) const override {
    out = table_.values(set_.with(e));
  }

  void add(ElementId e) override {
    set_.insert(e);
    values_ = table_.values(set_);
  }

 private:
  const ScenarioTable& table_;
};

}  // namespace

const Eigen::VectorXd& ScenarioTable::weights() const {
  static const Eigen::VectorXd kNone;
  return kNone;
}

double ScenarioTable::value(const ElementSet& s, std::size_t scenario) const {
  if (scenario >= scenario_count()) {
    throw ParameterError("scenario index " + std::to_string(scenario) +
                         " out of range");
  }
  return values(s)[static_cast<Eigen::Index>(scenario)];
}

double ScenarioTable::mean_value(std::span<const ElementId> s) const {
  const Eigen::VectorXd f = values(s);
  const Eigen::VectorXd& w = weights();
  double sum = 0.0;
  if (w.size() == 0) {
    for (Eigen::Index k = 0; k < f.size(); ++k) sum += f[k];
    return sum / static_cast<double>(f.size());
  }
  for (Eigen::Index k = 0; k < f.size(); ++k) sum += w[k] * f[k];
  return sum;
}

std::unique_ptr<ScenarioGrowth> ScenarioTable::grow() const {
  return std::make_unique<RecomputingGrowth>(*this);
}

void validate_weights(const Eigen::VectorXd& w, std::size_t scenarios) {
  if (static_cast<std::size_t>(w.size()) != scenarios) {
    throw ParameterError("expected " + std::to_string(scenarios) +
                         " scenario weights, got " + std::to_string(w.size()));
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (!(w[k] >= 0.0)) throw ParameterError("negative scenario weight");
    sum += w[k];
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ParameterError("scenario weights sum to " + std::to_string(sum));
  }
}

FunctionTable::FunctionTable(std::size_t elements, std::size_t scenarios,
                             std::uint64_t seed, PointFn fn,
                             Eigen::VectorXd weights)
    : elements_(elements),
      scenarios_(scenarios),
      seed_(seed),
      fn_(std::move(fn)),
      weights_(std::move(weights)) {
  if (scenarios_ == 0) throw ParameterError("scenario table needs n_s >= 1");
  if (weights_.size() != 0) validate_weights(weights_, scenarios_);
}

Eigen::VectorXd FunctionTable::values(std::span<const ElementId> s) const {
  for (ElementId e : s) {
    if (e.index >= elements_) {
      throw InvalidElementError("element " + std::to_string(e.index) +
                                " outside table of " +
                                std::to_string(elements_));
    }
  }
  Eigen::VectorXd out(static_cast<Eigen::Index>(scenarios_));
  for (std::size_t k = 0; k < scenarios_; ++k) {
    out[static_cast<Eigen::Index>(k)] = fn_(s, k);
  }
  return out;
}

}  // namespace cvarsel
