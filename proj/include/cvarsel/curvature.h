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

#ifndef CVARSEL_CURVATURE_H_
#define CVARSEL_CURVATURE_H_

#include <Eigen/Dense>

#include "cvarsel/greedy.h"

namespace cvarsel {

inline constexpr double kZeroSingletonTolerance = 1e-12;

struct Curvature {
  double value = 0.0;
  Eigen::VectorXd marginals;   // f(X) - f(X \ {s})
  Eigen::VectorXd singletons;  // f({s})
};

// Total curvature with marginals taken at the full ground set:
//   1 - min_s (f(X) - f(X \ {s})) / f({s}).
// For submodular f the full-set marginal is the smallest one, so the result
// upper-bounds the curvature restricted to independent sets. Clamped to
// [0, 1]. Throws ZeroSingletonError if some f({s}) <= 1e-12.
Curvature curvature_estimate(const SetFunction& f, const GroundSet& x);

}  // namespace cvarsel

#endif  // CVARSEL_CURVATURE_H_
