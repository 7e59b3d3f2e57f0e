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

#include "cvarsel/brute_force.h"

#include <string>

#include "cvarsel/errors.h"

namespace cvarsel {
namespace {

void extend(const Matroid& m, std::size_t n, std::size_t from,
            std::vector<ElementId>& current, std::vector<ElementSet>& out,
            std::size_t limit) {
  if (out.size() >= limit) {
    throw InstanceTooLargeError("more than " + std::to_string(limit) +
                                " independent sets");
  }
  out.emplace_back(std::span<const ElementId>(current));
  for (std::size_t i = from; i < n; ++i) {
    const ElementId e(i);
    if (!m.can_add(current, e)) continue;
    current.push_back(e);
    extend(m, n, i + 1, current, out, limit);
    current.pop_back();
  }
}

}  // namespace

std::vector<ElementSet> enumerate_independent_sets(const Matroid& m,
                                                   const GroundSet& x,
                                                   std::size_t limit) {
  if (x.size() > kMaxBruteForceElements) {
    throw InstanceTooLargeError("brute force limited to " +
                                std::to_string(kMaxBruteForceElements) +
                                " elements, got " + std::to_string(x.size()));
  }
  if (m.ground_size() != x.size()) {
    throw ParameterError("matroid and ground set sizes differ");
  }
  std::vector<ElementSet> out;
  std::vector<ElementId> current;
  extend(m, x.size(), 0, current, out, limit);
  return out;
}

BruteForceResult brute_force_max_h(const AuxFunction& h, const Matroid& m,
                                   const GroundSet& x,
                                   std::span<const double> tau_grid,
                                   std::size_t max_evaluations) {
  if (tau_grid.empty()) throw ParameterError("empty tau grid");
  const std::size_t set_limit = max_evaluations / tau_grid.size() + 1;
  const std::vector<ElementSet> sets = enumerate_independent_sets(m, x, set_limit);
  if (sets.size() * tau_grid.size() > max_evaluations) {
    throw InstanceTooLargeError(
        "brute force needs " + std::to_string(sets.size() * tau_grid.size()) +
        " evaluations, limit " + std::to_string(max_evaluations));
  }

  BruteForceResult best;
  bool have = false;
  for (const ElementSet& s : sets) {
    for (double tau : tau_grid) {
      const double v = h(s, tau);
      ++best.evaluations;
      if (!have || v > best.value) {
        have = true;
        best.set = s;
        best.tau = tau;
        best.value = v;
      }
    }
  }
  return best;
}

}  // namespace cvarsel
