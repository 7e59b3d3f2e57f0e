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

#include "cvarsel/ground_set.h"

#include <algorithm>

#include "cvarsel/errors.h"

namespace cvarsel {

GroundSet::GroundSet(std::size_t size) : size_(size) {
  if (size == 0) throw ParameterError("ground set must be non-empty");
}

GroundSet::GroundSet(std::size_t size, std::vector<std::string> labels)
    : GroundSet(size) {
  if (labels.size() != size) {
    throw ParameterError("ground set labels: expected " +
                         std::to_string(size) + " entries, got " +
                         std::to_string(labels.size()));
  }
  labels_ = std::move(labels);
}

std::string GroundSet::label(ElementId e) const {
  check(e);
  return has_labels() ? labels_[e.index] : std::to_string(e.index);
}

void GroundSet::check(ElementId e) const {
  if (!valid(e)) {
    throw InvalidElementError("element " + std::to_string(e.index) +
                              " outside ground set of size " +
                              std::to_string(size_));
  }
}

void check_members(const GroundSet& x, std::span<const ElementId> s) {
  for (ElementId e : s) x.check(e);
}

ElementSet::ElementSet(std::initializer_list<ElementId> ids) {
  for (ElementId e : ids) insert(e);
}

ElementSet::ElementSet(std::span<const ElementId> ids) {
  for (ElementId e : ids) insert(e);
}

ElementSet ElementSet::from_indices(std::span<const std::size_t> ids) {
  ElementSet s;
  for (std::size_t i : ids) s.insert(ElementId(i));
  return s;
}

void ElementSet::insert(ElementId e) {
  if (contains(e)) {
    throw InvalidElementError("duplicate element " + std::to_string(e.index));
  }
  members_.push_back(e);
}

bool ElementSet::contains(ElementId e) const {
  return std::find(members_.begin(), members_.end(), e) != members_.end();
}

ElementSet ElementSet::with(ElementId e) const {
  ElementSet out = *this;
  out.insert(e);
  return out;
}

std::vector<ElementId> ElementSet::sorted() const {
  std::vector<ElementId> out = members_;
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::size_t> ElementSet::indices() const {
  std::vector<std::size_t> out;
  out.reserve(members_.size());
  for (ElementId e : members_) out.push_back(e.index);
  return out;
}

bool ElementSet::same_members(const ElementSet& other) const {
  return sorted() == other.sorted();
}

}  // namespace cvarsel
