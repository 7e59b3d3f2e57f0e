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


// Failure-prone sensor coverage on an occupancy grid. Each candidate cell
// sees the free cells reachable by an unobstructed straight segment; a
// selected sensor is alive with probability p_i and then covers its whole
// footprint. Areas are cell counts.

#ifndef CVARSEL_COVERAGE_H_
#define CVARSEL_COVERAGE_H_

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "cvarsel/ground_set.h"
#include "cvarsel/matroid.h"
#include "cvarsel/scenario_table.h"

namespace cvarsel {

struct Cell {
  int row = 0;
  int col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

// Axis-aligned block of obstacle cells.
struct Rect {
  int row = 0;
  int col = 0;
  int height = 0;
  int width = 0;
};

// Fixed-size bit set over grid cells (row-major index).
class CellMask {
 public:
  CellMask() = default;
  explicit CellMask(std::size_t bits);

  std::size_t bits() const { return bits_; }
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  std::size_t count() const;
  // |this \ covered|.
  std::size_t count_new(const CellMask& covered) const;
  CellMask& operator|=(const CellMask& other);
  const std::vector<std::uint64_t>& words() const { return words_; }
  friend bool operator==(const CellMask&, const CellMask&) = default;

 private:
  std::size_t bits_ = 0;
  std::vector<std::uint64_t> words_;
};

class OccupancyGrid {
 public:
  OccupancyGrid() = default;
  OccupancyGrid(int height, int width, const std::vector<Rect>& obstacles);

  int height() const { return height_; }
  int width() const { return width_; }
  std::size_t cell_count() const { return blocked_.size(); }
  bool inside(Cell c) const {
    return c.row >= 0 && c.col >= 0 && c.row < height_ && c.col < width_;
  }
  bool free(Cell c) const { return !blocked_[index(c)]; }
  std::size_t index(Cell c) const {
    return static_cast<std::size_t>(c.row) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(c.col);
  }
  Cell cell(std::size_t index) const;
  std::size_t free_count() const { return free_count_; }

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<bool> blocked_;
  std::size_t free_count_ = 0;
};

// True iff the segment between the two cell centers crosses no obstacle
// cell. The traversal is a supercover walk: where the segment passes
// exactly through a lattice corner, both cells beside the corner must be
// free. Symmetric in a and b.
bool visible(const OccupancyGrid& grid, Cell a, Cell b);

// All free cells visible from c (including c).
CellMask footprint(const OccupancyGrid& grid, Cell c);

struct CoverageInstance {
  std::uint64_t seed = 0;
  std::size_t budget = 1;  // M
  std::vector<Rect> obstacles;
  OccupancyGrid grid;
  std::vector<Cell> candidates;
  std::vector<CellMask> footprints;
  Eigen::VectorXd success_prob;  // p_i = 1 - v_i / v_free

  std::size_t candidate_count() const { return candidates.size(); }
  std::size_t free_cells() const { return grid.free_count(); }
  std::size_t footprint_size(std::size_t i) const {
    return footprints[i].count();
  }
};

// Candidates are drawn uniformly without replacement from the free cells.
CoverageInstance coverage_generate(int width, int height,
                                   const std::vector<Rect>& obstacles,
                                   std::size_t n_candidates, std::size_t budget,
                                   std::uint64_t seed);

// Rebuilds footprints and p_i for explicit candidate cells.
CoverageInstance coverage_from_candidates(int width, int height,
                                          const std::vector<Rect>& obstacles,
                                          std::vector<Cell> candidates,
                                          std::size_t budget,
                                          std::uint64_t seed);

// The 20 x 20 grid with three rectangular obstacles used by the experiments.
std::vector<Rect> default_coverage_obstacles();

GroundSet coverage_ground_set(const CoverageInstance& inst);
Matroid coverage_matroid(const CoverageInstance& inst);

// Whether sensor i survives in scenario k, keyed by (seed, k, i).
bool coverage_alive(const CoverageInstance& inst, std::size_t sensor,
                    std::size_t scenario, std::uint64_t seed);

// Covered free cells in scenario k. Throws MatroidViolationError when
// |s| > M.
double coverage_utility(const CoverageInstance& inst, const ElementSet& s,
                        std::size_t scenario, std::uint64_t seed);
inline double coverage_utility(const CoverageInstance& inst,
                               const ElementSet& s, std::size_t scenario) {
  return coverage_utility(inst, s, scenario, inst.seed);
}

inline constexpr std::size_t kMaxExactSensors = 20;

// All 2^|s| alive patterns of s as (probability, covered cells), starting
// from the all-alive pattern. Entry j has member b (in ascending id order)
// alive iff bit b of 2^|s| - 1 - j is set.
std::vector<std::pair<double, double>> coverage_exact_scenarios(
    const CoverageInstance& inst, const ElementSet& s);

// Scenario table of alive patterns. In sampled mode scenario k draws each
// sensor independently. In exact mode the table holds all 2^N patterns of
// the N candidates with their probabilities as weights.
class CoverageTable : public ScenarioTable {
 public:
  static CoverageTable sampled(const CoverageInstance& inst, std::size_t n_s,
                               std::uint64_t seed);
  static CoverageTable exact(const CoverageInstance& inst);

  std::size_t element_count() const override { return footprints_.size(); }
  std::size_t scenario_count() const override {
    return static_cast<std::size_t>(alive_.rows());
  }
  std::uint64_t seed() const override { return seed_; }
  const Eigen::VectorXd& weights() const override { return weights_; }
  Eigen::VectorXd values(std::span<const ElementId> s) const override;
  std::unique_ptr<ScenarioGrowth> grow() const override;

  bool alive(std::size_t scenario, std::size_t sensor) const {
    return alive_(static_cast<Eigen::Index>(scenario),
                  static_cast<Eigen::Index>(sensor)) != 0;
  }

 private:
  using AliveMatrix =
      Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;
  class Growth;

  CoverageTable(std::vector<CellMask> footprints, AliveMatrix alive,
                Eigen::VectorXd weights, std::uint64_t seed)
      : footprints_(std::move(footprints)),
        alive_(std::move(alive)),
        weights_(std::move(weights)),
        seed_(seed) {}

  std::vector<CellMask> footprints_;
  AliveMatrix alive_;
  Eigen::VectorXd weights_;
  std::uint64_t seed_;
};

}  // namespace cvarsel

#endif  // CVARSEL_COVERAGE_H_
