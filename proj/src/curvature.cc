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

#include "cvarsel/curvature.h"

#include <algorithm>
#include <limits>
#include <string>

namespace cvarsel {

Curvature curvature_estimate(const SetFunction& f, const GroundSet& x) {
  const std::size_t n = x.size();
  Curvature c;
  c.marginals.resize(n);
  c.singletons.resize(n);

  ElementSet full;
  for (std::size_t i = 0; i < n; ++i) full.insert(ElementId(i));
  const double f_full = f(full);

  double min_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    const double single = f(ElementSet{ElementId(i)});
    if (single <= kZeroSingletonTolerance) {
      throw ZeroSingletonError("curvature undefined: f({" + x.label(ElementId(i)) +
                               "}) = " + std::to_string(single));
    }
    ElementSet rest;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) rest.insert(ElementId(j));
    }
    c.singletons[i] = single;
    c.marginals[i] = f_full - f(rest);
    min_ratio = std::min(min_ratio, c.marginals[i] / single);
  }
  c.value = std::clamp(1.0 - min_ratio, 0.0, 1.0);
  return c;
}

}  // namespace cvarsel
