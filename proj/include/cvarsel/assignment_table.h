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

#ifndef CVARSEL_ASSIGNMENT_TABLE_H_
#define CVARSEL_ASSIGNMENT_TABLE_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "cvarsel/scenario_table.h"

namespace cvarsel {

// Sum-of-max utility over sampled values:
//
//   f(S, y_k) = sum_g max_{e in S, group(e) = g} samples(k, e),
//
// with an empty group contributing 0. Demands are the groups in the
// vehicle-assignment problems; samples are arrival efficiencies (>= 0).
class AssignmentTable : public ScenarioTable {
 public:
  // samples: n_s x |X|. group[e] < group_count for every element.
  AssignmentTable(Eigen::MatrixXd samples, std::vector<std::size_t> group,
                  std::size_t group_count, std::uint64_t seed);

  std::size_t element_count() const override { return group_.size(); }
  std::size_t scenario_count() const override {
    return static_cast<std::size_t>(samples_.rows());
  }
  std::uint64_t seed() const override { return seed_; }
  Eigen::VectorXd values(std::span<const ElementId> s) const override;
  std::unique_ptr<ScenarioGrowth> grow() const override;

  const Eigen::MatrixXd& samples() const { return samples_; }
  std::size_t group_of(ElementId e) const { return group_[e.index]; }
  std::size_t group_count() const { return group_count_; }

 private:
  class Growth;

  Eigen::MatrixXd samples_;
  std::vector<std::size_t> group_;
  std::size_t group_count_;
  std::uint64_t seed_;
};

}  // namespace cvarsel

#endif  // CVARSEL_ASSIGNMENT_TABLE_H_
