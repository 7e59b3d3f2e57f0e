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


// Directed street networks with stochastic intersection waits.
//
// Travelling a path P costs sum_{v in P} wait(v) + beta2 * sum_{w in P}
// len(w) / maxv(w). The wait at node v is Normal(0, beta1 * deg(v))
// truncated to [0, t_max_factor * deg(v)], where deg counts in- and
// out-edges.

#ifndef CVARSEL_STREETNET_H_
#define CVARSEL_STREETNET_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "cvarsel/rng.h"

namespace cvarsel {

struct StreetNode {
  double x = 0.0;
  double y = 0.0;
};

struct StreetEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  double len_m = 0.0;
  double maxv_mps = 0.0;
};

class StreetNetwork {
 public:
  StreetNetwork(std::vector<StreetNode> nodes, std::vector<StreetEdge> edges,
                double beta1 = 1.0, double beta2 = 1.0,
                double t_max_factor = 5.0);

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<StreetNode>& nodes() const { return nodes_; }
  const std::vector<StreetEdge>& edges() const { return edges_; }
  const StreetEdge& edge(std::size_t e) const { return edges_[e]; }
  double beta1() const { return beta1_; }
  double beta2() const { return beta2_; }
  double t_max_factor() const { return t_max_factor_; }

  std::size_t degree(std::size_t v) const { return degree_[v]; }
  // Outgoing / incoming edge indices, ascending by (other endpoint, index).
  const std::vector<std::size_t>& out_edges(std::size_t v) const { return out_[v]; }
  const std::vector<std::size_t>& in_edges(std::size_t v) const { return in_[v]; }

  // beta2 * len / maxv.
  double edge_time(std::size_t e) const;
  // Shortest edge u -> v (smallest index on ties), if any.
  std::optional<std::size_t> edge_between(std::size_t u, std::size_t v) const;

  double wait_sigma(std::size_t v) const;
  double wait_cap(std::size_t v) const;

  // Throws InvalidElementError for an unknown node.
  void check_node(std::size_t v) const;

 private:
  std::vector<StreetNode> nodes_;
  std::vector<StreetEdge> edges_;
  double beta1_;
  double beta2_;
  double t_max_factor_;
  std::vector<std::size_t> degree_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<std::vector<std::size_t>> in_;
};

struct StreetPath {
  std::vector<std::size_t> nodes;  // from .. to
  std::vector<std::size_t> edges;  // nodes.size() - 1 entries
  double length = 0.0;             // metres
  double degree = 0.0;             // sum of node degrees
};

// Shortest paths from every node to one target (reverse Dijkstra). Among
// shortest paths the one with the lexicographically smallest node
// sequence is returned; suffixes of returned paths are returned paths.
class ShortestPathTree {
 public:
  ShortestPathTree(const StreetNetwork& net, std::size_t target);

  std::size_t target() const { return target_; }
  bool reachable(std::size_t from) const;
  // Remaining distance; +inf when unreachable.
  double distance(std::size_t from) const { return dist_[from]; }
  std::optional<StreetPath> path_from(std::size_t from) const;

 private:
  const StreetNetwork* net_;
  std::size_t target_;
  std::vector<double> dist_;
};

// Empty optional when `to` is unreachable. from == to gives the one-node
// path with length 0.
std::optional<StreetPath> shortest_path(const StreetNetwork& net,
                                        std::size_t from, std::size_t to);

// Inverse CDF of Normal(0, sigma^2) restricted to [0, cap]; u in (0, 1).
// Returns 0 for a degenerate support (cap <= 0 or sigma <= 0).
double truncated_normal_quantile(double u, double sigma, double cap);
// Mean of the same distribution.
double truncated_normal_mean(double sigma, double cap);

double sample_wait(const StreetNetwork& net, std::size_t node,
                   CounterStream& rng);

// n samples of the travel time along path. include_first_wait = false
// skips the wait at path.nodes[0] (already being served).
std::vector<double> path_travel_time_samples(const StreetNetwork& net,
                                             const StreetPath& path,
                                             std::size_t n, CounterStream& rng,
                                             bool include_first_wait = true);

// beta2 * sum of edge lengths / speed limits.
double path_edge_time(const StreetNetwork& net, const StreetPath& path);

struct CityOptions {
  double min_len_m = 80.0;
  double max_len_m = 400.0;
  double block_m = 250.0;  // node spacing used for coordinates
  // Probability of a two-way diagonal street across each grid block.
  double diagonal_prob = 0.0;
  double beta1 = 1.0;
  double beta2 = 1.0;
  double t_max_factor = 5.0;
};

// rows x cols two-way grid. Each street gets one length in
// [min_len_m, max_len_m] (0.1 m resolution) and one speed limit from
// {5, 10, 15, 20} m/s shared by both directions.
StreetNetwork synth_city(std::size_t rows, std::size_t cols, std::uint64_t seed,
                         const CityOptions& options = {});

}  // namespace cvarsel

#endif  // CVARSEL_STREETNET_H_
