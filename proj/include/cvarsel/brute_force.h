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

#ifndef CVARSEL_BRUTE_FORCE_H_
#define CVARSEL_BRUTE_FORCE_H_

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "cvarsel/ground_set.h"
#include "cvarsel/matroid.h"

namespace cvarsel {

using AuxFunction = std::function<double(const ElementSet&, double)>;

inline constexpr std::size_t kMaxBruteForceElements = 20;
inline constexpr std::size_t kMaxBruteForceEvaluations = 10'000'000;

struct BruteForceResult {
  ElementSet set;  // ascending ids
  double tau = 0.0;
  double value = 0.0;
  std::size_t evaluations = 0;
};

// Every independent set of m, in lexicographic order of ascending ids.
// Throws InstanceTooLargeError past |X| = 20 or `limit` sets.
std::vector<ElementSet> enumerate_independent_sets(
    const Matroid& m, const GroundSet& x,
    std::size_t limit = kMaxBruteForceEvaluations);

// Exact maximizer of h over (independent set) x (grid point). Ties go to the
// lexicographically smallest set, then the smallest tau. Throws
// InstanceTooLargeError when sets x grid exceeds max_evaluations.
BruteForceResult brute_force_max_h(
    const AuxFunction& h, const Matroid& m, const GroundSet& x,
    std::span<const double> tau_grid,
    std::size_t max_evaluations = kMaxBruteForceEvaluations);

}  // namespace cvarsel

#endif  // CVARSEL_BRUTE_FORCE_H_
