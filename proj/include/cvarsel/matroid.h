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

#ifndef CVARSEL_MATROID_H_
#define CVARSEL_MATROID_H_

#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "cvarsel/ground_set.h"

namespace cvarsel {

struct UniformMatroid {
  std::size_t rank = 1;
};

// Element e belongs to block[e]; at most caps[b] members of block b.
struct PartitionMatroid {
  std::vector<std::size_t> block;
  std::vector<std::size_t> caps;
};

// Independence system over a GroundSet. Only the uniform and partition
// variants are supported.
class Matroid {
 public:
  // Validates against x; throws ParameterError on malformed definitions.
  static Matroid uniform(const GroundSet& x, std::size_t rank);
  static Matroid partition(const GroundSet& x, std::vector<std::size_t> block,
                           std::vector<std::size_t> caps);

  std::size_t ground_size() const { return ground_size_; }
  bool is_uniform() const {
    return std::holds_alternative<UniformMatroid>(variant_);
  }
  const UniformMatroid& as_uniform() const {
    return std::get<UniformMatroid>(variant_);
  }
  const PartitionMatroid& as_partition() const {
    return std::get<PartitionMatroid>(variant_);
  }

  // Size of every maximal independent set.
  std::size_t rank() const;

  // True iff s is independent. Throws InvalidElementError for out-of-range
  // members.
  bool contains(std::span<const ElementId> s) const;
  bool contains(const ElementSet& s) const { return contains(s.view()); }

  // True iff s + {e} is independent, assuming s is. e must not be in s.
  bool can_add(std::span<const ElementId> s, ElementId e) const;

 private:
  Matroid(std::size_t ground_size,
          std::variant<UniformMatroid, PartitionMatroid> v)
      : ground_size_(ground_size), variant_(std::move(v)) {}

  void check(ElementId e) const;

  std::size_t ground_size_;
  std::variant<UniformMatroid, PartitionMatroid> variant_;
};

}  // namespace cvarsel

#endif  // CVARSEL_MATROID_H_
