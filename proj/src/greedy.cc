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

#include "cvarsel/greedy.h"

#include <unordered_map>

namespace cvarsel {
namespace {

class SetFunctionOracle {
 public:
  explicit SetFunctionOracle(const SetFunction& f) : f_(f), base_(f({})) {}

  double gain(ElementId e) {
    const double v = f_(current_.with(e));
    last_[e.index] = v;
    return v - base_;
  }

  void commit(ElementId e) {
    current_.insert(e);
    auto it = last_.find(e.index);
    base_ = it != last_.end() ? it->second : f_(current_);
    last_.clear();
  }

 private:
  const SetFunction& f_;
  ElementSet current_;
  double base_;
  std::unordered_map<std::uint32_t, double> last_;
};

}  // namespace

GreedyResult greedy_maximize(const SetFunction& eval, const Matroid& m,
                             const GroundSet& x) {
  SetFunctionOracle oracle(eval);
  GreedyResult r = greedy_maximize(oracle, m, x);
  ++r.eval_count;  // f(empty)
  return r;
}

}  // namespace cvarsel
