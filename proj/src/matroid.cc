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

#include "cvarsel/matroid.h"

#include <algorithm>
#include <string>

#include "cvarsel/errors.h"

namespace cvarsel {

Matroid Matroid::uniform(const GroundSet& x, std::size_t rank) {
  if (rank < 1 || rank > x.size()) {
    throw ParameterError("uniform matroid rank " + std::to_string(rank) +
                         " outside [1, " + std::to_string(x.size()) + "]");
  }
  return Matroid(x.size(), UniformMatroid{rank});
}

Matroid Matroid::partition(const GroundSet& x, std::vector<std::size_t> block,
                           std::vector<std::size_t> caps) {
  if (block.size() != x.size()) {
    throw ParameterError("partition matroid: block assignment has " +
                         std::to_string(block.size()) + " entries for " +
                         std::to_string(x.size()) + " elements");
  }
  if (caps.empty()) throw ParameterError("partition matroid: no blocks");
  for (std::size_t c : caps) {
    if (c < 1) throw ParameterError("partition matroid: caps must be >= 1");
  }
  for (std::size_t b : block) {
    if (b >= caps.size()) {
      throw ParameterError("partition matroid: block index " +
                           std::to_string(b) + " has no cap");
    }
  }
  return Matroid(x.size(), PartitionMatroid{std::move(block), std::move(caps)});
}

void Matroid::check(ElementId e) const {
  if (e.index >= ground_size_) {
    throw InvalidElementError("element " + std::to_string(e.index) +
                              " outside ground set of size " +
                              std::to_string(ground_size_));
  }
}

std::size_t Matroid::rank() const {
  if (is_uniform()) return as_uniform().rank;
  const auto& p = as_partition();
  std::vector<std::size_t> block_size(p.caps.size(), 0);
  for (std::size_t b : p.block) ++block_size[b];
  std::size_t r = 0;
  for (std::size_t b = 0; b < p.caps.size(); ++b) {
    r += std::min(p.caps[b], block_size[b]);
  }
  return r;
}

bool Matroid::contains(std::span<const ElementId> s) const {
  for (ElementId e : s) check(e);
  if (is_uniform()) return s.size() <= as_uniform().rank;
  const auto& p = as_partition();
  std::vector<std::size_t> used(p.caps.size(), 0);
  for (ElementId e : s) {
    if (++used[p.block[e.index]] > p.caps[p.block[e.index]]) return false;
  }
  return true;
}

bool Matroid::can_add(std::span<const ElementId> s, ElementId e) const {
  check(e);
  if (is_uniform()) return s.size() + 1 <= as_uniform().rank;
  const auto& p = as_partition();
  const std::size_t b = p.block[e.index];
  std::size_t used = 0;
  for (ElementId m : s) {
    if (p.block[m.index] == b) ++used;
  }
  return used + 1 <= p.caps[b];
}

}  // namespace cvarsel
