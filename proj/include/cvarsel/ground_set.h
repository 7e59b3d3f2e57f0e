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

#ifndef CVARSEL_GROUND_SET_H_
#define CVARSEL_GROUND_SET_H_

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cvarsel {

// Index of one selectable item in a GroundSet.
struct ElementId {
  std::uint32_t index = 0;

  constexpr ElementId() = default;
  constexpr explicit ElementId(std::size_t i)
      : index(static_cast<std::uint32_t>(i)) {}

  constexpr std::size_t value() const { return index; }
  friend constexpr auto operator<=>(ElementId, ElementId) = default;
};

// The finite universe X. Labels are optional and purely cosmetic.
class GroundSet {
 public:
  explicit GroundSet(std::size_t size);
  GroundSet(std::size_t size, std::vector<std::string> labels);

  std::size_t size() const { return size_; }
  bool has_labels() const { return !labels_.empty(); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::string label(ElementId e) const;

  bool valid(ElementId e) const { return e.index < size_; }
  // Throws InvalidElementError when e is out of range.
  void check(ElementId e) const;

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

// Ordered collection of distinct elements; insertion order is preserved and
// records the greedy pick order.
class ElementSet {
 public:
  ElementSet() = default;
  ElementSet(std::initializer_list<ElementId> ids);
  explicit ElementSet(std::span<const ElementId> ids);
  static ElementSet from_indices(std::span<const std::size_t> ids);

  // Throws InvalidElementError on a duplicate.
  void insert(ElementId e);
  bool contains(ElementId e) const;
  ElementSet with(ElementId e) const;

  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  const std::vector<ElementId>& members() const { return members_; }
  std::span<const ElementId> view() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  // Members in ascending id order, for canonical comparison.
  std::vector<ElementId> sorted() const;
  std::vector<std::size_t> indices() const;

  // Set equality ignores insertion order.
  bool same_members(const ElementSet& other) const;
  friend bool operator==(const ElementSet&, const ElementSet&) = default;

 private:
  std::vector<ElementId> members_;
};

// Throws InvalidElementError if any member is outside the ground set.
void check_members(const GroundSet& x, std::span<const ElementId> s);

}  // namespace cvarsel

#endif  // CVARSEL_GROUND_SET_H_
