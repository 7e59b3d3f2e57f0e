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


#include "cvarsel/streetnet.h"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <tuple>
#include <utility>

#include <boost/math/special_functions/erf.hpp>

#include "cvarsel/errors.h"

namespace cvarsel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double path_tolerance(double d) { return 1e-9 * std::max(1.0, d); }

}  // namespace

StreetNetwork::StreetNetwork(std::vector<StreetNode> nodes,
                             std::vector<StreetEdge> edges, double beta1,
                             double beta2, double t_max_factor)
    : nodes_(std::move(nodes)),
      edges_(std::move(edges)),
      beta1_(beta1),
      beta2_(beta2),
      t_max_factor_(t_max_factor) {
  if (nodes_.empty()) throw InstanceError("street network has no nodes");
  if (!(beta1_ > 0.0) || !(beta2_ > 0.0) || !(t_max_factor_ >= 0.0)) {
    throw InstanceError("street network needs beta1 > 0, beta2 > 0, "
                        "t_max_factor >= 0");
  }
  degree_.assign(nodes_.size(), 0);
  out_.resize(nodes_.size());
  in_.resize(nodes_.size());
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    const StreetEdge& w = edges_[e];
    if (w.from >= nodes_.size() || w.to >= nodes_.size()) {
      throw InstanceError("edge " + std::to_string(e) + " has an unknown endpoint");
    }
    if (w.from == w.to) throw InstanceError("edge " + std::to_string(e) + " is a loop");
    if (!(w.len_m > 0.0) || !(w.maxv_mps > 0.0) || !std::isfinite(w.len_m) ||
        !std::isfinite(w.maxv_mps)) {
      throw InstanceError("edge " + std::to_string(e) +
                          " needs finite len_m > 0 and maxv_mps > 0");
    }
    ++degree_[w.from];
    ++degree_[w.to];
    out_[w.from].push_back(e);
    in_[w.to].push_back(e);
  }
  for (std::size_t v = 0; v < nodes_.size(); ++v) {
    std::sort(out_[v].begin(), out_[v].end(), [&](std::size_t a, std::size_t b) {
      return std::pair(edges_[a].to, a) < std::pair(edges_[b].to, b);
    });
    std::sort(in_[v].begin(), in_[v].end(), [&](std::size_t a, std::size_t b) {
      return std::pair(edges_[a].from, a) < std::pair(edges_[b].from, b);
    });
  }
}

double StreetNetwork::edge_time(std::size_t e) const {
  return beta2_ * edges_[e].len_m / edges_[e].maxv_mps;
}

std::optional<std::size_t> StreetNetwork::edge_between(std::size_t u,
                                                       std::size_t v) const {
  std::optional<std::size_t> best;
  for (std::size_t e : out_[u]) {
    if (edges_[e].to != v) continue;
    if (!best || edges_[e].len_m < edges_[*best].len_m) best = e;
  }
  return best;
}

double StreetNetwork::wait_sigma(std::size_t v) const {
  return std::sqrt(beta1_ * static_cast<double>(degree_[v]));
}

double StreetNetwork::wait_cap(std::size_t v) const {
  return t_max_factor_ * static_cast<double>(degree_[v]);
}

void StreetNetwork::check_node(std::size_t v) const {
  if (v >= nodes_.size()) {
    throw InvalidElementError("node " + std::to_string(v) + " not in network");
  }
}

ShortestPathTree::ShortestPathTree(const StreetNetwork& net, std::size_t target)
    : net_(&net), target_(target), dist_(net.node_count(), kInf) {
  net.check_node(target);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
  dist_[target] = 0.0;
  queue.emplace(0.0, target);
  while (!queue.empty()) {
    const auto [d, v] = queue.top();
    queue.pop();
    if (d > dist_[v]) continue;
    for (std::size_t e : net.in_edges(v)) {
      const std::size_t u = net.edge(e).from;
      const double nd = d + net.edge(e).len_m;
      if (nd < dist_[u]) {
        dist_[u] = nd;
        queue.emplace(nd, u);
      }
    }
  }
}

bool ShortestPathTree::reachable(std::size_t from) const {
  net_->check_node(from);
  return std::isfinite(dist_[from]);
}

std::optional<StreetPath> ShortestPathTree::path_from(std::size_t from) const {
  if (!reachable(from)) return std::nullopt;
  const StreetNetwork& net = *net_;
  StreetPath p;
  p.nodes.push_back(from);
  std::size_t u = from;
  while (u != target_) {
    // Smallest next node on some shortest path, then shortest edge.
    std::optional<std::size_t> pick;
    for (std::size_t e : net.out_edges(u)) {
      const StreetEdge& w = net.edge(e);
      if (!std::isfinite(dist_[w.to])) continue;
      if (w.len_m + dist_[w.to] > dist_[u] + path_tolerance(dist_[u])) continue;
      if (!pick || std::tuple(w.to, w.len_m, e) <
                       std::tuple(net.edge(*pick).to, net.edge(*pick).len_m, *pick)) {
        pick = e;
      }
    }
    if (!pick) throw Error("shortest path walk lost the tree");
    p.edges.push_back(*pick);
    p.length += net.edge(*pick).len_m;
    u = net.edge(*pick).to;
    p.nodes.push_back(u);
  }
  for (std::size_t v : p.nodes) p.degree += static_cast<double>(net.degree(v));
  return p;
}

std::optional<StreetPath> shortest_path(const StreetNetwork& net,
                                        std::size_t from, std::size_t to) {
  net.check_node(from);
  return ShortestPathTree(net, to).path_from(from);
}

double truncated_normal_quantile(double u, double sigma, double cap) {
  if (!(cap > 0.0) || !(sigma > 0.0)) return 0.0;
  // Phi(x / sigma) - 1/2 = u (Phi(cap / sigma) - 1/2), written with erf.
  const double z = u * std::erf(cap / (sigma * std::sqrt(2.0)));
  const double x = sigma * std::sqrt(2.0) * boost::math::erf_inv(z);
  return std::clamp(x, 0.0, cap);
}

double truncated_normal_mean(double sigma, double cap) {
  if (!(cap > 0.0) || !(sigma > 0.0)) return 0.0;
  const double b = cap / sigma;
  const double mass = 0.5 * std::erf(b / std::sqrt(2.0));
  const double pdf0 = 1.0 / std::sqrt(2.0 * M_PI);
  const double pdfb = pdf0 * std::exp(-0.5 * b * b);
  return sigma * (pdf0 - pdfb) / mass;
}

double sample_wait(const StreetNetwork& net, std::size_t node,
                   CounterStream& rng) {
  return truncated_normal_quantile(rng.uniform_open(), net.wait_sigma(node),
                                   net.wait_cap(node));
}

double path_edge_time(const StreetNetwork& net, const StreetPath& path) {
  double t = 0.0;
  for (std::size_t e : path.edges) t += net.edge_time(e);
  return t;
}

std::vector<double> path_travel_time_samples(const StreetNetwork& net,
                                             const StreetPath& path,
                                             std::size_t n, CounterStream& rng,
                                             bool include_first_wait) {
  const double edges = path_edge_time(net, path);
  std::vector<double> out(n);
  for (double& t : out) {
    double waits = 0.0;
    for (std::size_t i = include_first_wait ? 0 : 1; i < path.nodes.size(); ++i) {
      waits += sample_wait(net, path.nodes[i], rng);
    }
    t = waits + edges;
  }
  return out;
}

StreetNetwork synth_city(std::size_t rows, std::size_t cols, std::uint64_t seed,
                         const CityOptions& o) {
  if (rows < 2 || cols < 2) throw ParameterError("synth_city needs rows, cols >= 2");
  if (!(o.min_len_m > 0.0) || o.max_len_m < o.min_len_m) {
    throw ParameterError("synth_city: bad street length range");
  }
  CounterStream rng(seed, StreamDomain::kCityLayout);
  static constexpr double kSpeeds[] = {5.0, 10.0, 15.0, 20.0};
  std::vector<StreetNode> nodes;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      nodes.push_back({static_cast<double>(c) * o.block_m,
                       static_cast<double>(r) * o.block_m});
    }
  }
  std::vector<StreetEdge> edges;
  auto street = [&](std::size_t a, std::size_t b) {
    const double len =
        std::round(rng.uniform(o.min_len_m, o.max_len_m) * 10.0) / 10.0;
    const double v = kSpeeds[rng.below(4)];
    edges.push_back({a, b, len, v});
    edges.push_back({b, a, len, v});
  };
  auto id = [&](std::size_t r, std::size_t c) { return r * cols + c; };
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      if (c + 1 < cols) street(id(r, c), id(r, c + 1));
      if (r + 1 < rows) street(id(r, c), id(r + 1, c));
      if (o.diagonal_prob > 0.0 && r + 1 < rows && c + 1 < cols &&
          rng.uniform() < o.diagonal_prob) {
        street(id(r, c), id(r + 1, c + 1));
      }
    }
  }
  return StreetNetwork(std::move(nodes), std::move(edges), o.beta1, o.beta2,
                       o.t_max_factor);
}

}  // namespace cvarsel
