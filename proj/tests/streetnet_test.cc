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


#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "cvarsel/errors.h"
#include "cvarsel/io.h"
#include "cvarsel/ota.h"
#include "cvarsel/streetnet.h"
#include "doctest.h"

namespace cvarsel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

StreetNetwork golden_city() {
  return streetnet_from_json(read_json(std::string(CVARSEL_TEST_DATA) +
                                       "/city_5x5_seed7.json"));
}

// Two-way street between a and b.
void street(std::vector<StreetEdge>& edges, std::size_t a, std::size_t b,
            double len, double maxv = 10.0) {
  edges.push_back({a, b, len, maxv});
  edges.push_back({b, a, len, maxv});
}

// Every simple path from `from` to `to`, by depth-first search.
void simple_paths(const StreetNetwork& net, std::size_t at, std::size_t to,
                  std::vector<std::size_t>& nodes, double len,
                  std::vector<std::pair<double, std::vector<std::size_t>>>& out) {
  if (at == to) {
    out.emplace_back(len, nodes);
    return;
  }
  for (std::size_t e : net.out_edges(at)) {
    const std::size_t next = net.edge(e).to;
    if (std::find(nodes.begin(), nodes.end(), next) != nodes.end()) continue;
    nodes.push_back(next);
    simple_paths(net, next, to, nodes, len + net.edge(e).len_m, out);
    nodes.pop_back();
  }
}

// Density of the wait at a node, integrated by composite Simpson.
double simpson_mean(double sigma, double cap) {
  const int n = 20000;
  const double h = cap / n;
  double mass = 0.0, moment = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
    const double pdf = std::exp(-0.5 * (x / sigma) * (x / sigma));
    mass += w * pdf;
    moment += w * x * pdf;
  }
  return moment / mass;
}

TEST_CASE("shortest path to itself is empty") {
  const StreetNetwork net = synth_city(3, 3, 1);
  const auto p = shortest_path(net, 4, 4);
  REQUIRE(p.has_value());
  CHECK(p->nodes == std::vector<std::size_t>{4});
  CHECK(p->edges.empty());
  CHECK(p->length == 0.0);
  CHECK(p->degree == static_cast<double>(net.degree(4)));
}

TEST_CASE("shortest path takes the shorter of two routes") {
  std::vector<StreetEdge> edges;
  street(edges, 0, 1, 2.0);
  street(edges, 1, 3, 3.0);
  street(edges, 0, 2, 3.0);
  street(edges, 2, 3, 4.0);
  const StreetNetwork net({{}, {}, {}, {}}, edges);
  const auto p = shortest_path(net, 0, 3);
  REQUIRE(p.has_value());
  CHECK(p->length == 5.0);
  CHECK(p->nodes == std::vector<std::size_t>{0, 1, 3});
  CHECK(p->degree == 12.0);
}

TEST_CASE("unreachable target has no path") {
  std::vector<StreetEdge> edges = {{0, 1, 1.0, 1.0}};
  const StreetNetwork net({{}, {}}, edges);
  CHECK_FALSE(shortest_path(net, 1, 0).has_value());
  CHECK(ShortestPathTree(net, 0).distance(1) == kInf);
  CHECK_THROWS_AS(shortest_path(net, 0, 5), InvalidElementError);
}

TEST_CASE("shortest path on a 4x4 city matches exhaustive enumeration") {
  const StreetNetwork net = synth_city(4, 4, 11);
  for (std::size_t to : {15u, 12u, 5u}) {
    std::vector<std::pair<double, std::vector<std::size_t>>> all;
    std::vector<std::size_t> start = {0};
    simple_paths(net, 0, to, start, 0.0, all);
    const double best = std::min_element(all.begin(), all.end())->first;
    const auto p = shortest_path(net, 0, to);
    REQUIRE(p.has_value());
    CHECK(p->length == doctest::Approx(best).epsilon(1e-12));
    double len = 0.0, deg = 0.0;
    for (std::size_t e : p->edges) len += net.edge(e).len_m;
    for (std::size_t v : p->nodes) deg += static_cast<double>(net.degree(v));
    CHECK(p->length == doctest::Approx(len).epsilon(1e-12));
    CHECK(p->degree == deg);
  }
}

TEST_CASE("equal-length shortest paths break ties lexicographically") {
  // 3x3 lattice with unit streets: many shortest corner-to-corner routes.
  std::vector<StreetEdge> edges;
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      const std::size_t v = r * 3 + c;
      if (c + 1 < 3) street(edges, v, v + 1, 1.0);
      if (r + 1 < 3) street(edges, v, v + 3, 1.0);
    }
  }
  const StreetNetwork net(std::vector<StreetNode>(9), edges);
  for (std::size_t from : {0u, 2u, 6u}) {
    for (std::size_t to : {8u, 4u, 0u}) {
      std::vector<std::pair<double, std::vector<std::size_t>>> all;
      std::vector<std::size_t> start = {from};
      simple_paths(net, from, to, start, 0.0, all);
      std::sort(all.begin(), all.end());
      const auto p = shortest_path(net, from, to);
      REQUIRE(p.has_value());
      CHECK(p->nodes == all.front().second);
    }
  }
}

TEST_CASE("single edge travel time is length over speed") {
  std::vector<StreetEdge> edges = {{0, 1, 100.0, 10.0}};
  const StreetNetwork net({{}, {}}, edges, 1.0, 1.0, 0.0);
  const auto p = shortest_path(net, 0, 1);
  REQUIRE(p.has_value());
  CounterStream rng(1, StreamDomain::kTestData);
  for (double t : path_travel_time_samples(net, *p, 50, rng)) CHECK(t == 10.0);
}

TEST_CASE("zero wait cap leaves the edge-time sum") {
  const StreetNetwork city = synth_city(4, 4, 3);
  const StreetNetwork net(city.nodes(), city.edges(), 1.0, 2.0, 0.0);
  const auto p = shortest_path(net, 0, 15);
  REQUIRE(p.has_value());
  double expected = 0.0;
  for (std::size_t e : p->edges) {
    expected += 2.0 * net.edge(e).len_m / net.edge(e).maxv_mps;
  }
  CounterStream rng(2, StreamDomain::kTestData);
  for (double t : path_travel_time_samples(net, *p, 20, rng)) {
    CHECK(t == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("waits at a degree-4 node follow the truncated normal") {
  const StreetNetwork net = synth_city(2, 2, 5);
  REQUIRE(net.degree(0) == 4);
  const double sigma = std::sqrt(4.0), cap = 20.0;
  CHECK(net.wait_sigma(0) == doctest::Approx(sigma));
  CHECK(net.wait_cap(0) == cap);
  const double oracle = simpson_mean(sigma, cap);
  CHECK(truncated_normal_mean(sigma, cap) == doctest::Approx(oracle).epsilon(1e-9));

  CounterStream rng(3, StreamDomain::kTestData);
  const int n = 10000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < n; ++i) {
    const double w = sample_wait(net, 0, rng);
    REQUIRE(w >= 0.0);
    REQUIRE(w <= cap);
    sum += w;
    sq += w * w;
  }
  const double mean = sum / n;
  const double sd = std::sqrt(sq / n - mean * mean);
  CHECK(std::abs(mean - oracle) <= 3.0 * sd / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("truncated normal quantile hits the support ends") {
  CHECK(truncated_normal_quantile(0.0, 2.0, 10.0) == 0.0);
  CHECK(truncated_normal_quantile(1.0, 2.0, 10.0) == doctest::Approx(10.0));
  CHECK(truncated_normal_quantile(0.5, 2.0, 0.0) == 0.0);
  // Median of the half normal restricted to a wide cap.
  CHECK(truncated_normal_quantile(0.5, 1.0, 50.0) ==
        doctest::Approx(0.6744897501960817).epsilon(1e-9));
}

TEST_CASE("synthetic city shape") {
  const StreetNetwork two = synth_city(2, 2, 9);
  CHECK(two.node_count() == 4);
  CHECK(two.edge_count() == 8);
  for (std::size_t v = 0; v < 4; ++v) CHECK(two.degree(v) == 4);
  for (std::size_t rows : {2u, 3u, 6u}) {
    for (std::size_t cols : {2u, 4u}) {
      const StreetNetwork net = synth_city(rows, cols, rows * 10 + cols);
      CHECK(net.node_count() == rows * cols);
      CHECK(net.edge_count() == 2 * (rows * (cols - 1) + cols * (rows - 1)));
      for (const StreetEdge& e : net.edges()) {
        CHECK(e.len_m >= 80.0);
        CHECK(e.len_m <= 400.0);
        CHECK((e.maxv_mps == 5.0 || e.maxv_mps == 10.0 || e.maxv_mps == 15.0 ||
               e.maxv_mps == 20.0));
      }
      std::vector<std::size_t> deg(net.node_count(), 0);
      for (const StreetEdge& e : net.edges()) {
        ++deg[e.from];
        ++deg[e.to];
      }
      for (std::size_t v = 0; v < net.node_count(); ++v) CHECK(net.degree(v) == deg[v]);
    }
  }
  CHECK_THROWS_AS(synth_city(1, 5, 1), ParameterError);
}

TEST_CASE("diagonal shortcuts add degree variety") {
  CityOptions o;
  o.diagonal_prob = 0.5;
  const StreetNetwork net = synth_city(5, 5, 7, o);
  CHECK(net.edge_count() > 80);
  std::vector<std::size_t> degrees;
  for (std::size_t v = 0; v < net.node_count(); ++v) degrees.push_back(net.degree(v));
  std::sort(degrees.begin(), degrees.end());
  degrees.erase(std::unique(degrees.begin(), degrees.end()), degrees.end());
  CHECK(degrees.size() > 3);
}

TEST_CASE("golden 5x5 city is reproduced by the generator") {
  const StreetNetwork golden = golden_city();
  const StreetNetwork fresh = synth_city(5, 5, 7);
  CHECK(streetnet_to_json(golden) == streetnet_to_json(fresh));
  CHECK(golden.node_count() == 25);
  CHECK(golden.edge_count() == 80);
}

OtaConfig config(OtaMode mode, std::uint64_t seed, double gamma = 0.5) {
  OtaConfig c;
  c.mode = mode;
  c.seed = seed;
  c.gamma_trigger = gamma;
  c.n_s = 100;
  return c;
}

TEST_CASE("one vehicle and one demand make one sampled traversal") {
  const StreetNetwork net = golden_city();
  const std::vector<std::size_t> vehicles = {0}, demands = {24};
  for (OtaMode mode : {OtaMode::kStreet, OtaMode::kGeneral, OtaMode::kOffline,
                       OtaMode::kAllStep}) {
    const OtaRun run = ota_run(net, vehicles, demands, config(mode, 4));
    CHECK(run.assignment_count == 1);
    const auto p = shortest_path(net, 0, 24);
    REQUIRE(p.has_value());
    double expected = 0.0;
    for (std::size_t k = 0; k < p->edges.size(); ++k) {
      expected += ota_wait_sample(net, p->nodes[k], 4, 0, k) + net.edge_time(p->edges[k]);
    }
    CHECK(run.arrival_time == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("offline mode never triggers") {
  const StreetNetwork net = golden_city();
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto [vehicles, demands] = ota_placement(net, 6, 4, seed);
    const OtaRun run = ota_run(net, vehicles, demands, config(OtaMode::kOffline, seed));
    CHECK(run.trigger_steps.empty());
    CHECK(run.assignment_count == 1);
  }
}

// Remaining length and degree from a logged vehicle state to demand node d.
std::pair<double, double> remaining(const StreetNetwork& net, const OtaVehicle& v,
                                    const ShortestPathTree& tree) {
  double left = 0.0;
  std::size_t start = v.node;
  if (v.on_edge) {
    const StreetEdge& e = net.edge(*v.edge);
    left = e.len_m * (1.0 - v.fraction);
    start = e.to;
  }
  const auto p = tree.path_from(start);
  REQUIRE(p.has_value());
  return {left + p->length, p->degree};
}

void check_invariants(const StreetNetwork& net, const OtaRun& run) {
  const std::size_t n = run.demand_nodes.size();
  std::vector<ShortestPathTree> trees;
  for (std::size_t d : run.demand_nodes) trees.emplace_back(net, d);

  CHECK(run.assignment_count == run.trigger_steps.size() + 1);
  CHECK(run.assignments.size() == run.assignment_count);
  double total = 0.0;
  std::vector<std::size_t> triggered;
  std::vector<bool> reached(n, false);
  OtaAssignment prev = run.assignments.front().second;
  std::vector<OtaVehicle> prev_state;
  for (const OtaStep& s : run.steps) {
    double min_next = kInf;
    for (double t : s.t_next) min_next = std::min(min_next, t);
    CHECK(s.t_step == min_next);
    total += s.t_step;
    if (s.triggered) triggered.push_back(s.step);

    // Assignment in force at the trigger check.
    OtaAssignment before = prev;
    for (std::size_t i = 0; i < n; ++i) {
      if (!s.reached[i]) continue;
      for (auto& a : before) {
        if (a == i) a.reset();
      }
    }
    if (run.config.mode == OtaMode::kStreet && !std::all_of(s.reached.begin(), s.reached.end(), [](bool b) { return b; })) {
      bool dominance = false;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<double, double>> m;
        for (std::size_t j = 0; j < before.size(); ++j) {
          if (before[j] == i && !s.vehicles[j].retired) {
            m.push_back(remaining(net, s.vehicles[j], trees[i]));
          }
        }
        for (std::size_t a = 0; a < m.size(); ++a) {
          for (std::size_t b = 0; b < m.size(); ++b) {
            if (a != b && m[a].first <= run.config.gamma_trigger * m[b].first &&
                m[a].second <= m[b].second) {
              dominance = true;
            }
          }
        }
      }
      CHECK(s.triggered == dominance);
    }

    // Reached demands stay unassigned from here on.
    for (std::size_t i = 0; i < n; ++i) {
      if (s.reached[i]) reached[i] = true;
      CHECK(s.reached[i] == reached[i]);
    }
    for (const auto& a : s.assignment) {
      if (a) CHECK_FALSE(reached[*a]);
    }

    // Progress while the assignment is unchanged.
    if (!prev_state.empty() && !s.triggered) {
      for (std::size_t j = 0; j < s.assignment.size(); ++j) {
        const auto& a = s.assignment[j];
        if (!a || prev[j] != a || s.vehicles[j].retired) continue;
        const double before_len = remaining(net, prev_state[j], trees[*a]).first;
        const double after_len = remaining(net, s.vehicles[j], trees[*a]).first;
        CHECK(after_len <= before_len + 1e-9 * std::max(1.0, before_len));
      }
    }
    prev = s.assignment;
    prev_state = s.vehicles;
  }
  CHECK(run.arrival_time == total);
  CHECK(triggered == run.trigger_steps);
  for (bool r : reached) CHECK(r);
  for (std::size_t k = 1; k < run.assignments.size(); ++k) {
    CHECK(run.assignments[k].first == run.trigger_steps[k - 1]);
  }
  for (std::size_t t : run.trigger_steps) {
    CHECK(t >= 1);
    CHECK(t <= run.steps.size());
  }
}

TEST_CASE("three vehicles and two demands keep the log invariants") {
  const StreetNetwork net = golden_city();
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto [vehicles, demands] = ota_placement(net, 3, 2, seed);
    const OtaRun run = ota_run(net, vehicles, demands, config(OtaMode::kStreet, seed));
    check_invariants(net, run);
  }
}

TEST_CASE("every mode keeps the log invariants at larger scales") {
  const StreetNetwork net = golden_city();
  for (OtaMode mode : {OtaMode::kStreet, OtaMode::kGeneral, OtaMode::kOffline,
                       OtaMode::kAllStep}) {
    for (auto [r, n] : {std::pair<std::size_t, std::size_t>{6, 4}, {12, 5}}) {
      for (std::uint64_t seed = 1; seed <= 3; ++seed) {
        const auto [vehicles, demands] = ota_placement(net, r, n, seed);
        const OtaRun run = ota_run(net, vehicles, demands, config(mode, seed, 0.7));
        check_invariants(net, run);
        if (mode == OtaMode::kAllStep) {
          CHECK(run.trigger_steps.size() < run.steps.size());
          for (std::size_t k = 0; k < run.trigger_steps.size(); ++k) {
            CHECK(run.trigger_steps[k] == k + 1);
          }
        }
      }
    }
  }
}

TEST_CASE("zero-gain picks can be kept assigned") {
  const StreetNetwork net = golden_city();
  const auto [vehicles, demands] = ota_placement(net, 6, 4, 2);
  OtaConfig c = config(OtaMode::kStreet, 2);
  c.drop_idle_picks = false;
  const OtaRun run = ota_run(net, vehicles, demands, c);
  for (const auto& a : run.assignments.front().second) CHECK(a.has_value());
  check_invariants(net, run);
}

TEST_CASE("runs are reproducible byte for byte") {
  const StreetNetwork net = golden_city();
  const auto [vehicles, demands] = ota_placement(net, 6, 4, 8);
  const OtaConfig c = config(OtaMode::kStreet, 8);
  const std::string a = ota_log_ndjson(ota_run(net, vehicles, demands, c));
  const std::string b = ota_log_ndjson(ota_run(net, vehicles, demands, c));
  CHECK(a == b);
  CHECK(a.find("\"event\":\"end\"") != std::string::npos);
}

TEST_CASE("ota configuration errors") {
  const StreetNetwork net = golden_city();
  const std::vector<std::size_t> one = {0}, two = {3, 4};
  CHECK_THROWS_AS(ota_run(net, one, two, config(OtaMode::kStreet, 1)), ParameterError);
  OtaConfig bad = config(OtaMode::kStreet, 1);
  bad.gamma_trigger = 1.0;
  CHECK_THROWS_AS(ota_run(net, two, one, bad), ParameterError);
  bad = config(OtaMode::kStreet, 1);
  bad.alpha = 0.0;
  CHECK_THROWS_AS(ota_run(net, two, one, bad), ParameterError);
  CHECK_THROWS_AS(parse_ota_mode("sometimes"), ParameterError);
  CHECK(parse_ota_mode("ota") == OtaMode::kStreet);
}

TEST_CASE("unreachable demand is reported") {
  // Node 2 has no incoming street.
  std::vector<StreetEdge> edges = {{0, 1, 100.0, 10.0}, {1, 0, 100.0, 10.0},
                                   {2, 0, 100.0, 10.0}};
  const StreetNetwork net(std::vector<StreetNode>(3), edges);
  const std::vector<std::size_t> vehicles = {0}, demands = {2};
  CHECK_THROWS_AS(ota_run(net, vehicles, demands, config(OtaMode::kStreet, 1)),
                  UnreachableError);
}

}  // namespace
}  // namespace cvarsel
