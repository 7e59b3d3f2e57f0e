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

#ifndef CVARSEL_GREEDY_H_
#define CVARSEL_GREEDY_H_

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "cvarsel/errors.h"
#include "cvarsel/ground_set.h"
#include "cvarsel/matroid.h"

namespace cvarsel {

using SetFunction = std::function<double(const ElementSet&)>;

struct GreedyResult {
  ElementSet selected;        // in pick order
  std::vector<double> gains;  // clamped marginal gain of each pick
  std::size_t eval_count = 0;
};

// Supplies marginal gains of the set built so far. gain(e) may be called
// for any feasible e not yet committed; commit(e) appends e.
template <class O>
concept MarginalOracle = requires(O& o, ElementId e) {
  { o.gain(e) } -> std::convertible_to<double>;
  o.commit(e);
};

// Matroid-constrained greedy: repeatedly adds the feasible element with the
// largest marginal gain until the set is maximal. Negative gains (rounding
// noise on monotone functions) are clamped to zero; ties go to the smallest
// ElementId. eval_count counts gain() calls.
template <MarginalOracle O>
GreedyResult greedy_maximize(O& oracle, const Matroid& m, const GroundSet& x) {
  if (m.ground_size() != x.size()) {
    throw ParameterError("matroid and ground set sizes differ");
  }
  GreedyResult r;
  std::vector<char> taken(x.size(), 0);
  for (;;) {
    std::optional<ElementId> best;
    double best_gain = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      const ElementId e(i);
      if (taken[i] || !m.can_add(r.selected.view(), e)) continue;
      const double g = std::max(0.0, static_cast<double>(oracle.gain(e)));
      ++r.eval_count;
      if (!best || g > best_gain) {
        best = e;
        best_gain = g;
      }
    }
    if (!best) break;
    oracle.commit(*best);
    r.selected.insert(*best);
    r.gains.push_back(best_gain);
    taken[best->index] = 1;
  }
  return r;
}

// Convenience form over a plain set function. f(empty) is evaluated once;
// afterwards every evaluation is of a candidate extension.
GreedyResult greedy_maximize(const SetFunction& eval, const Matroid& m,
                             const GroundSet& x);

}  // namespace cvarsel

#endif  // CVARSEL_GREEDY_H_
