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


#include "cvarsel/coverage.h"

#include <bit>
#include <cstdlib>
#include <string>

#include "cvarsel/errors.h"
#include "cvarsel/rng.h"

namespace cvarsel {

CellMask::CellMask(std::size_t bits) : bits_(bits), words_((bits + 63) / 64) {}

std::size_t CellMask::count() const {
  std::size_t n = 0;
  for (std::uint64_t w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

std::size_t CellMask::count_new(const CellMask& covered) const {
  std::size_t n = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    n += static_cast<std::size_t>(std::popcount(words_[i] & ~covered.words_[i]));
  }
  return n;
}

CellMask& CellMask::operator|=(const CellMask& other) {
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

OccupancyGrid::OccupancyGrid(int height, int width,
                             const std::vector<Rect>& obstacles)
    : height_(height), width_(width) {
  if (height <= 0 || width <= 0) {
    throw ParameterError("grid dimensions must be positive");
  }
  blocked_.assign(static_cast<std::size_t>(height) * static_cast<std::size_t>(width),
                  false);
  for (const Rect& r : obstacles) {
    if (r.height <= 0 || r.width <= 0) {
      throw ParameterError("obstacle rectangles must have positive size");
    }
    for (int y = r.row; y < r.row + r.height; ++y) {
      for (int x = r.col; x < r.col + r.width; ++x) {
        if (!inside({y, x})) throw ParameterError("obstacle outside the grid");
        blocked_[index({y, x})] = true;
      }
    }
  }
  for (bool b : blocked_) free_count_ += b ? 0 : 1;
}

Cell OccupancyGrid::cell(std::size_t index) const {
  return {static_cast<int>(index / static_cast<std::size_t>(width_)),
          static_cast<int>(index % static_cast<std::size_t>(width_))};
}

bool visible(const OccupancyGrid& grid, Cell a, Cell b) {
  if (!grid.free(a) || !grid.free(b)) return false;
  const int dx = b.col - a.col, dy = b.row - a.row;
  const long ax = std::abs(dx), ay = std::abs(dy);
  const int sx = dx > 0 ? 1 : -1, sy = dy > 0 ? 1 : -1;
  long i = 0, j = 0;  // x and y boundary crossings so far
  Cell c = a;
  while (i < ax || j < ay) {
    // Crossing times are (2i + 1) / (2 ax) and (2j + 1) / (2 ay).
    long cmp;
    if (i == ax) {
      cmp = 1;
    } else if (j == ay) {
      cmp = -1;
    } else {
      cmp = (2 * i + 1) * ay - (2 * j + 1) * ax;
    }
    if (cmp == 0) {
      if (!grid.free({c.row, c.col + sx}) || !grid.free({c.row + sy, c.col})) {
        return false;
      }
      c.col += sx;
      c.row += sy;
      ++i;
      ++j;
    } else if (cmp < 0) {
      c.col += sx;
      ++i;
    } else {
      c.row += sy;
      ++j;
    }
    if (!grid.free(c)) return false;
  }
  return true;
}

CellMask footprint(const OccupancyGrid& grid, Cell c) {
  CellMask mask(grid.cell_count());
  for (std::size_t k = 0; k < grid.cell_count(); ++k) {
    if (visible(grid, c, grid.cell(k))) mask.set(k);
  }
  return mask;
}

std::vector<Rect> default_coverage_obstacles() {
  return {{4, 3, 3, 7}, {9, 12, 7, 3}, {14, 2, 2, 6}};
}

CoverageInstance coverage_from_candidates(int width, int height,
                                          const std::vector<Rect>& obstacles,
                                          std::vector<Cell> candidates,
                                          std::size_t budget,
                                          std::uint64_t seed) {
  CoverageInstance inst;
  inst.seed = seed;
  inst.budget = budget;
  inst.obstacles = obstacles;
  inst.grid = OccupancyGrid(height, width, obstacles);
  if (candidates.empty()) throw ParameterError("coverage needs N >= 1 candidates");
  if (budget == 0 || budget > candidates.size()) {
    throw ParameterError("coverage budget M must lie in [1, N]");
  }
  const double v_free = static_cast<double>(inst.grid.free_count());
  inst.success_prob.resize(static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const Cell c = candidates[i];
    if (!inst.grid.inside(c) || !inst.grid.free(c)) {
      throw InstanceError("candidate " + std::to_string(i) +
                          " is not a free grid cell");
    }
    for (std::size_t k = 0; k < i; ++k) {
      if (candidates[k] == c) throw InstanceError("duplicate candidate cell");
    }
    inst.footprints.push_back(footprint(inst.grid, c));
    inst.success_prob[static_cast<Eigen::Index>(i)] =
        1.0 - static_cast<double>(inst.footprints.back().count()) / v_free;
  }
  inst.candidates = std::move(candidates);
  return inst;
}

CoverageInstance coverage_generate(int width, int height,
                                   const std::vector<Rect>& obstacles,
                                   std::size_t n_candidates, std::size_t budget,
                                   std::uint64_t seed) {
  const OccupancyGrid grid(height, width, obstacles);
  std::vector<Cell> free_cells;
  for (std::size_t k = 0; k < grid.cell_count(); ++k) {
    if (grid.free(grid.cell(k))) free_cells.push_back(grid.cell(k));
  }
  if (free_cells.size() < n_candidates) {
    throw InstanceError("coverage_generate: only " +
                        std::to_string(free_cells.size()) +
                        " free cells for " + std::to_string(n_candidates) +
                        " candidates");
  }
  CounterStream rng(seed, StreamDomain::kCoverageCandidates);
  std::vector<Cell> chosen;
  for (std::size_t i = 0; i < n_candidates; ++i) {
    const std::size_t pick = i + rng.below(free_cells.size() - i);
    std::swap(free_cells[i], free_cells[pick]);
    chosen.push_back(free_cells[i]);
  }
  return coverage_from_candidates(width, height, obstacles, std::move(chosen),
                                  budget, seed);
}

GroundSet coverage_ground_set(const CoverageInstance& inst) {
  std::vector<std::string> labels;
  for (const Cell& c : inst.candidates) {
    labels.push_back("(" + std::to_string(c.row) + "," + std::to_string(c.col) +
                     ")");
  }
  return GroundSet(inst.candidate_count(), std::move(labels));
}

Matroid coverage_matroid(const CoverageInstance& inst) {
  return Matroid::uniform(coverage_ground_set(inst), inst.budget);
}

bool coverage_alive(const CoverageInstance& inst, std::size_t sensor,
                    std::size_t scenario, std::uint64_t seed) {
  if (sensor >= inst.candidate_count()) {
    throw InvalidElementError("sensor " + std::to_string(sensor) +
                              " out of range");
  }
  CounterStream rng(seed, StreamDomain::kCoverageAlive,
                    {static_cast<std::uint64_t>(scenario),
                     static_cast<std::uint64_t>(sensor)});
  return rng.uniform() < inst.success_prob[static_cast<Eigen::Index>(sensor)];
}

double coverage_utility(const CoverageInstance& inst, const ElementSet& s,
                        std::size_t scenario, std::uint64_t seed) {
  if (s.size() > inst.budget) {
    throw MatroidViolationError("coverage_utility: |S| exceeds the budget");
  }
  CellMask covered(inst.grid.cell_count());
  for (ElementId e : s) {
    if (coverage_alive(inst, e.index, scenario, seed)) {
      covered |= inst.footprints[e.index];
    }
  }
  return static_cast<double>(covered.count());
}

std::vector<std::pair<double, double>> coverage_exact_scenarios(
    const CoverageInstance& inst, const ElementSet& s) {
  if (s.size() > kMaxExactSensors) {
    throw InstanceTooLargeError("exact enumeration needs |S| <= " +
                                std::to_string(kMaxExactSensors));
  }
  check_members(coverage_ground_set(inst), s.view());
  const std::vector<ElementId> members = s.sorted();
  const std::size_t patterns = std::size_t{1} << members.size();
  std::vector<std::pair<double, double>> out;
  out.reserve(patterns);
  // All-alive pattern first.
  for (std::size_t pattern = 0; pattern < patterns; ++pattern) {
    const std::size_t mask = patterns - 1 - pattern;
    double prob = 1.0;
    CellMask covered(inst.grid.cell_count());
    for (std::size_t b = 0; b < members.size(); ++b) {
      const double p =
          inst.success_prob[static_cast<Eigen::Index>(members[b].index)];
      if ((mask >> b) & 1U) {
        prob *= p;
        covered |= inst.footprints[members[b].index];
      } else {
        prob *= 1.0 - p;
      }
    }
    out.emplace_back(prob, static_cast<double>(covered.count()));
  }
  return out;
}

class CoverageTable::Growth : public ScenarioGrowth {
 public:
  explicit Growth(const CoverageTable& t)
      : t_(t),
        covered_(t.scenario_count(),
                 CellMask(t.footprints_.empty() ? 0 : t.footprints_[0].bits())) {
    values_ = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(t.scenario_count()));
  }

  void extended(ElementId e, Eigen::VectorXd& out) const override {
    const CellMask& fp = t_.footprints_[e.index];
    out = values_;
    for (std::size_t k = 0; k < covered_.size(); ++k) {
      if (t_.alive(k, e.index)) {
        out[static_cast<Eigen::Index>(k)] +=
            static_cast<double>(fp.count_new(covered_[k]));
      }
    }
  }

  void add(ElementId e) override {
    set_.insert(e);
    const CellMask& fp = t_.footprints_[e.index];
    for (std::size_t k = 0; k < covered_.size(); ++k) {
      if (t_.alive(k, e.index)) {
        covered_[k] |= fp;
        values_[static_cast<Eigen::Index>(k)] =
            static_cast<double>(covered_[k].count());
      }
    }
  }

 private:
  const CoverageTable& t_;
  std::vector<CellMask> covered_;
};

CoverageTable CoverageTable::sampled(const CoverageInstance& inst,
                                     std::size_t n_s, std::uint64_t seed) {
  if (n_s == 0) throw ParameterError("coverage table needs n_s >= 1");
  const std::size_t n = inst.candidate_count();
  AliveMatrix alive(static_cast<Eigen::Index>(n_s), static_cast<Eigen::Index>(n));
  for (std::size_t k = 0; k < n_s; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      alive(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) =
          coverage_alive(inst, i, k, seed) ? 1 : 0;
    }
  }
  return CoverageTable(inst.footprints, std::move(alive), Eigen::VectorXd(),
                       seed);
}

CoverageTable CoverageTable::exact(const CoverageInstance& inst) {
  const std::size_t n = inst.candidate_count();
  if (n > kMaxExactSensors) {
    throw InstanceTooLargeError("exact coverage table needs N <= " +
                                std::to_string(kMaxExactSensors));
  }
  const std::size_t patterns = std::size_t{1} << n;
  AliveMatrix alive(static_cast<Eigen::Index>(patterns),
                    static_cast<Eigen::Index>(n));
  Eigen::VectorXd weights(static_cast<Eigen::Index>(patterns));
  for (std::size_t mask = 0; mask < patterns; ++mask) {
    double prob = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const bool on = (mask >> i) & 1U;
      const double p = inst.success_prob[static_cast<Eigen::Index>(i)];
      prob *= on ? p : 1.0 - p;
      alive(static_cast<Eigen::Index>(mask), static_cast<Eigen::Index>(i)) =
          on ? 1 : 0;
    }
    weights[static_cast<Eigen::Index>(mask)] = prob;
  }
  validate_weights(weights, patterns);
  return CoverageTable(inst.footprints, std::move(alive), std::move(weights),
                       inst.seed);
}

Eigen::VectorXd CoverageTable::values(std::span<const ElementId> s) const {
  const std::size_t bits = footprints_.empty() ? 0 : footprints_[0].bits();
  Eigen::VectorXd out(static_cast<Eigen::Index>(scenario_count()));
  for (ElementId e : s) {
    if (e.index >= footprints_.size()) {
      throw InvalidElementError("element " + std::to_string(e.index) +
                                " outside coverage table");
    }
  }
  for (std::size_t k = 0; k < scenario_count(); ++k) {
    CellMask covered(bits);
    for (ElementId e : s) {
      if (alive(k, e.index)) covered |= footprints_[e.index];
    }
    out[static_cast<Eigen::Index>(k)] = static_cast<double>(covered.count());
  }
  return out;
}

std::unique_ptr<ScenarioGrowth> CoverageTable::grow() const {
  return std::make_unique<Growth>(*this);
}

}  // namespace cvarsel
