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

#include "cvarsel/assignment_table.h"

#include <string>

#include "cvarsel/errors.h"

namespace cvarsel {
namespace {

// Sum of the group columns in ascending group order.
Eigen::VectorXd sum_groups(const Eigen::MatrixXd& group_max) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(group_max.rows());
  for (Eigen::Index g = 0; g < group_max.cols(); ++g) out += group_max.col(g);
  return out;
}

}  // namespace

class AssignmentTable::Growth : public ScenarioGrowth {
 public:
  explicit Growth(const AssignmentTable& t)
      : t_(t),
        group_max_(Eigen::MatrixXd::Zero(t.samples_.rows(),
                                         static_cast<Eigen::Index>(t.group_count_))) {
    values_ = Eigen::VectorXd::Zero(t.samples_.rows());
  }

  void extended(ElementId e, Eigen::VectorXd& out) const override {
    // Same summation order as values(), so results are bit-identical.
    const auto target = static_cast<Eigen::Index>(t_.group_of(e));
    out = Eigen::VectorXd::Zero(group_max_.rows());
    for (Eigen::Index g = 0; g < group_max_.cols(); ++g) {
      if (g == target) {
        out += group_max_.col(g).cwiseMax(t_.samples_.col(e.index));
      } else {
        out += group_max_.col(g);
      }
    }
  }

  void add(ElementId e) override {
    set_.insert(e);
    const auto g = static_cast<Eigen::Index>(t_.group_of(e));
    group_max_.col(g) = group_max_.col(g).cwiseMax(t_.samples_.col(e.index));
    values_ = sum_groups(group_max_);
  }

 private:
  const AssignmentTable& t_;
  Eigen::MatrixXd group_max_;
};

AssignmentTable::AssignmentTable(Eigen::MatrixXd samples,
                                 std::vector<std::size_t> group,
                                 std::size_t group_count, std::uint64_t seed)
    : samples_(std::move(samples)),
      group_(std::move(group)),
      group_count_(group_count),
      seed_(seed) {
  if (samples_.rows() == 0) throw ParameterError("assignment table needs n_s >= 1");
  if (static_cast<std::size_t>(samples_.cols()) != group_.size()) {
    throw ParameterError("assignment table: sample columns != element count");
  }
  for (std::size_t g : group_) {
    if (g >= group_count_) throw ParameterError("assignment table: bad group index");
  }
  if (!samples_.allFinite() || (samples_.array() < 0.0).any()) {
    throw ParameterError("assignment table: samples must be finite and >= 0");
  }
}

Eigen::VectorXd AssignmentTable::values(std::span<const ElementId> s) const {
  Eigen::MatrixXd group_max = Eigen::MatrixXd::Zero(
      samples_.rows(), static_cast<Eigen::Index>(group_count_));
  for (ElementId e : s) {
    if (e.index >= group_.size()) {
      throw InvalidElementError("element " + std::to_string(e.index) +
                                " outside assignment table");
    }
    const auto g = static_cast<Eigen::Index>(group_[e.index]);
    group_max.col(g) = group_max.col(g).cwiseMax(samples_.col(e.index));
  }
  return sum_groups(group_max);
}

std::unique_ptr<ScenarioGrowth> AssignmentTable::grow() const {
  return std::make_unique<Growth>(*this);
}

}  // namespace cvarsel
