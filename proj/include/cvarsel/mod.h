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


// Mobility-on-demand assignment: R vehicles, N demand locations in a
// 10 x 10 square. Element (i, j) assigns vehicle j to demand i and has id
// i * R + j. Efficiencies e_ij are uniform on an interval around
// mean_eff(i, j) = 10 / d_ij.

#ifndef CVARSEL_MOD_H_
#define CVARSEL_MOD_H_

#include <cstddef>
#include <cstdint>

#include <Eigen/Dense>

#include "cvarsel/assignment_table.h"
#include "cvarsel/ground_set.h"
#include "cvarsel/matroid.h"

namespace cvarsel {

struct ModInstance {
  std::size_t n_demands = 0;
  std::size_t n_vehicles = 0;
  std::uint64_t seed = 0;
  Eigen::Matrix2Xd demands;   // 2 x N
  Eigen::Matrix2Xd vehicles;  // 2 x R
  Eigen::MatrixXd mean_eff;       // N x R, 10 / d_ij
  Eigen::MatrixXd eff_halfwidth;  // N x R, mean^2.5 / max mean

  std::size_t element_count() const { return n_demands * n_vehicles; }
  ElementId element(std::size_t demand, std::size_t vehicle) const {
    return ElementId(demand * n_vehicles + vehicle);
  }
  std::size_t demand_of(ElementId e) const { return e.index / n_vehicles; }
  std::size_t vehicle_of(ElementId e) const { return e.index % n_vehicles; }

  // Sampling interval [max(0, mean - halfwidth), mean + halfwidth].
  double eff_lower(std::size_t i, std::size_t j) const;
  double eff_upper(std::size_t i, std::size_t j) const;

  // Structural checks: shapes, finite positive means, 0 <= halfwidth.
  void validate() const;
};

inline constexpr double kModSide = 10.0;
inline constexpr int kModMaxAttempts = 1000;

// Positions uniform in [0, 10]^2. Layouts with coincident points are
// redrawn (at most kModMaxAttempts times).
ModInstance mod_generate(std::size_t n_demands, std::size_t n_vehicles,
                         std::uint64_t seed);

// Builds the efficiency matrices from given positions.
ModInstance mod_from_positions(Eigen::Matrix2Xd demands,
                               Eigen::Matrix2Xd vehicles, std::uint64_t seed);

GroundSet mod_ground_set(const ModInstance& inst);
// One block per vehicle, capacity 1.
Matroid mod_matroid(const ModInstance& inst);

// e_ij in scenario k, keyed by (seed, k, element id).
double mod_sample(const ModInstance& inst, ElementId e, std::size_t scenario,
                  std::uint64_t seed);

// f(S, y_k) = sum_i max_{j in S_i} e_ij; throws MatroidViolationError when
// a vehicle is assigned twice.
double mod_utility(const ModInstance& inst, const ElementSet& s,
                   std::size_t scenario, std::uint64_t seed);
inline double mod_utility(const ModInstance& inst, const ElementSet& s,
                          std::size_t scenario) {
  return mod_utility(inst, s, scenario, inst.seed);
}

// N * max_ij eff_upper(i, j).
double mod_gamma(const ModInstance& inst);

// Scenarios 0 .. n_s - 1 of every pair, grouped by demand.
AssignmentTable mod_scenario_table(const ModInstance& inst, std::size_t n_s,
                                   std::uint64_t seed);

}  // namespace cvarsel

#endif  // CVARSEL_MOD_H_
