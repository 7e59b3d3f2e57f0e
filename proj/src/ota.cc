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


#include "cvarsel/ota.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "cvarsel/assignment_table.h"
#include "cvarsel/errors.h"
#include "cvarsel/matroid.h"
#include "cvarsel/rng.h"
#include "cvarsel/sga.h"
#include "json.hpp"

namespace cvarsel {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kArrivalTolerance = 1e-9;
constexpr double kGainTolerance = 1e-12;
// Sampled travel times are floored here so efficiencies stay finite when a
// vehicle already stands on a demand node.
constexpr double kMinTravelTime = 1.0;

// Stream purposes for travel-time samples.
constexpr std::uint64_t kAssignPurpose = 1;
constexpr std::uint64_t kTriggerPurpose = 2;

struct Vehicle {
  std::size_t node = 0;
  std::vector<std::size_t> route;  // route[pos] == node
  std::vector<std::size_t> route_edges;
  std::size_t pos = 0;
  bool on_edge = false;
  bool need_wait = true;
  double wait_left = 0.0;
  double t_next = 0.0;
  double fraction = 0.0;
  std::size_t arrivals = 0;
  std::optional<std::size_t> demand;
  bool retired = false;

  bool has_next() const { return pos + 1 < route.size(); }
  std::size_t next_edge() const { return route_edges[pos]; }
};

// Where the rest of a vehicle's trip starts.
struct Start {
  std::size_t node = 0;
  double offset = 0.0;     // known time before leaving `node` (or reaching it)
  bool draw_wait = false;  // wait at `node` still unknown
  double edge_left_m = 0.0;
};

class Simulator {
 public:
  Simulator(const StreetNetwork& net, std::span<const std::size_t> vehicles,
            std::span<const std::size_t> demands, const OtaConfig& config)
      : net_(net), cfg_(config) {
    run_.config = config;
    run_.vehicle_nodes.assign(vehicles.begin(), vehicles.end());
    run_.demand_nodes.assign(demands.begin(), demands.end());
    for (std::size_t d : demands) trees_.emplace_back(net, d);
    v_.resize(vehicles.size());
    for (std::size_t j = 0; j < vehicles.size(); ++j) {
      v_[j].node = vehicles[j];
      v_[j].route = {vehicles[j]};
    }
    reached_.assign(demands.size(), false);
  }

  OtaRun run() {
    assign(0);
    settle();
    std::size_t step = 0;
    while (!all_reached()) {
      if (++step > cfg_.max_steps) {
        throw InstanceTooLargeError("ota: more than " +
                                    std::to_string(cfg_.max_steps) + " steps");
      }
      OtaStep log;
      log.step = step;
      log.t_next.assign(v_.size(), kInf);
      std::vector<char> moving(v_.size(), 0);
      for (std::size_t j = 0; j < v_.size(); ++j) {
        Vehicle& v = v_[j];
        if (!is_moving(v)) continue;
        if (!v.on_edge && v.need_wait) {
          v.wait_left = ota_wait_sample(net_, v.node, cfg_.seed, j, v.arrivals);
          v.need_wait = false;
          v.t_next = v.wait_left + net_.edge_time(v.next_edge());
        }
        moving[j] = 1;
        log.t_next[j] = v.t_next;
      }
      const double t_step = *std::min_element(log.t_next.begin(), log.t_next.end());
      if (!std::isfinite(t_step)) throw Error("ota: no vehicle can move");
      std::vector<std::size_t> arrived;
      for (std::size_t j = 0; j < v_.size(); ++j) {
        if (!moving[j]) continue;
        Vehicle& v = v_[j];
        if (v.t_next - t_step <= kArrivalTolerance * std::max(1.0, t_step)) {
          v.node = v.route[++v.pos];
          v.on_edge = false;
          v.need_wait = true;
          v.wait_left = 0.0;
          v.t_next = 0.0;
          v.fraction = 0.0;
          ++v.arrivals;
          arrived.push_back(j);
        } else if (!v.on_edge && v.wait_left > t_step) {
          v.wait_left -= t_step;
          v.t_next -= t_step;
        } else {
          // Partial edge: maxv (t_next - T_step) / beta2 metres remain.
          v.on_edge = true;
          v.wait_left = 0.0;
          v.t_next -= t_step;
          const StreetEdge& w = net_.edge(v.next_edge());
          const double left = w.maxv_mps * v.t_next / net_.beta2();
          v.fraction = std::clamp(1.0 - left / w.len_m, 0.0, 1.0);
        }
      }
      for (std::size_t j : arrived) {
        if (v_[j].demand && v_[j].node == run_.demand_nodes[*v_[j].demand]) reach(j);
      }
      run_.arrival_time += t_step;
      log.t_step = t_step;
      if (!all_reached() && should_trigger(step)) {
        log.triggered = true;
        run_.trigger_steps.push_back(step);
        assign(step);
        settle();
      }
      log.vehicles = snapshot_vehicles();
      log.reached = reached_;
      log.assignment = snapshot();
      run_.steps.push_back(std::move(log));
    }
    run_.assignment_count = run_.assignments.size();
    return std::move(run_);
  }

 private:
  bool all_reached() const {
    return std::all_of(reached_.begin(), reached_.end(), [](bool b) { return b; });
  }

  bool is_moving(const Vehicle& v) const {
    return !v.retired && v.demand && v.has_next();
  }

  Start start_of(const Vehicle& v) const {
    Start s;
    if (v.on_edge) {
      const StreetEdge& w = net_.edge(v.next_edge());
      s.node = w.to;
      s.offset = v.t_next;
      s.draw_wait = true;
      s.edge_left_m = w.len_m * (1.0 - v.fraction);
    } else {
      s.node = v.node;
      s.offset = v.need_wait ? 0.0 : v.wait_left;
      s.draw_wait = v.need_wait;
    }
    return s;
  }

  // Empty when demand i cannot be reached.
  std::vector<double> travel_samples(std::size_t j, std::size_t i,
                                     std::uint64_t purpose,
                                     std::uint64_t call) const {
    const Start s = start_of(v_[j]);
    const std::optional<StreetPath> path = trees_[i].path_from(s.node);
    if (!path) return {};
    CounterStream rng(cfg_.seed, StreamDomain::kPathSamples,
                      {purpose, call, static_cast<std::uint64_t>(j),
                       static_cast<std::uint64_t>(i)});
    std::vector<double> t =
        path_travel_time_samples(net_, *path, cfg_.n_s, rng, s.draw_wait);
    for (double& x : t) x = std::max(kMinTravelTime, x + s.offset);
    return t;
  }

  void assign(std::size_t step) {
    ++calls_;
    std::vector<std::size_t> active, open;
    for (std::size_t j = 0; j < v_.size(); ++j) {
      if (!v_[j].retired) active.push_back(j);
    }
    for (std::size_t i = 0; i < reached_.size(); ++i) {
      if (!reached_[i]) open.push_back(i);
    }
    const std::size_t a_count = active.size(), u_count = open.size();
    const auto ns = static_cast<Eigen::Index>(cfg_.n_s);
    Eigen::MatrixXd samples = Eigen::MatrixXd::Zero(
        ns, static_cast<Eigen::Index>(a_count * u_count));
    std::vector<std::size_t> group(a_count * u_count);
    std::vector<char> reachable(a_count * u_count, 0);
    std::vector<double> mean_eff(a_count * u_count, 0.0);
    for (std::size_t u = 0; u < u_count; ++u) {
      for (std::size_t a = 0; a < a_count; ++a) {
        const std::size_t e = u * a_count + a;
        group[e] = u;
        const std::vector<double> t =
            travel_samples(active[a], open[u], kAssignPurpose, calls_);
        if (t.empty()) continue;
        reachable[e] = 1;
        for (Eigen::Index k = 0; k < ns; ++k) {
          samples(k, static_cast<Eigen::Index>(e)) = 1.0 / t[static_cast<std::size_t>(k)];
        }
        mean_eff[e] = samples.col(static_cast<Eigen::Index>(e)).mean();
      }
    }
    const double top = samples.size() > 0 ? samples.maxCoeff() : 0.0;
    if (!(top > 0.0)) {
      throw UnreachableError("ota: no remaining vehicle can reach an open demand");
    }
    const double gamma = static_cast<double>(u_count) * top;
    RiskParams p;
    p.alpha = cfg_.alpha;
    p.gamma_cap = gamma;
    p.delta_step = gamma / static_cast<double>(cfg_.grid_points);
    AssignmentTable table(std::move(samples), std::move(group), u_count, cfg_.seed);
    GroundSet x(a_count * u_count);
    std::vector<std::size_t> block(a_count * u_count);
    for (std::size_t e = 0; e < block.size(); ++e) block[e] = e % a_count;
    const Matroid m =
        Matroid::partition(x, std::move(block), std::vector<std::size_t>(a_count, 1));
    const SgaResult r = sga_solve(table, m, x, p);

    for (std::size_t j : active) v_[j].demand.reset();
    // Picks that add nothing to H at tau_G only fill the matroid; their
    // demand is an id-order tie-break, so those vehicles stay idle.
    auto growth = table.grow();
    double base = auxiliary_h_empty(r.tau_g, p.alpha, table);
    Eigen::VectorXd ext;
    for (ElementId e : r.selected) {
      growth->extended(e, ext);
      const double next = auxiliary_h(ext, r.tau_g, p.alpha, table.weights());
      growth->add(e);
      const bool useful = next - base > kGainTolerance * std::max(1.0, std::abs(base));
      base = next;
      if (reachable[e.index] && (useful || !cfg_.drop_idle_picks)) {
        v_[active[e.index % a_count]].demand = open[e.index / a_count];
      }
    }
    // Every open demand keeps at least one vehicle.
    std::vector<std::size_t> served(reached_.size(), 0);
    for (std::size_t j : active) {
      if (v_[j].demand) ++served[*v_[j].demand];
    }
    for (std::size_t u = 0; u < u_count; ++u) {
      if (served[open[u]] > 0) continue;
      std::optional<std::size_t> best;
      for (std::size_t a = 0; a < a_count; ++a) {
        const Vehicle& v = v_[active[a]];
        if (!reachable[u * a_count + a]) continue;
        if (v.demand && served[*v.demand] < 2) continue;
        if (!best || mean_eff[u * a_count + a] > mean_eff[u * a_count + *best]) best = a;
      }
      if (!best) {
        throw UnreachableError("ota: demand " + std::to_string(open[u]) +
                               " cannot be reached by a spare vehicle");
      }
      Vehicle& v = v_[active[*best]];
      if (v.demand) --served[*v.demand];
      v.demand = open[u];
      ++served[open[u]];
    }
    for (std::size_t j : active) reroute(j);
    run_.assignments.emplace_back(step, snapshot());
  }

  void reroute(std::size_t j) {
    Vehicle& v = v_[j];
    if (!v.demand) return;  // idle vehicles keep their position and route
    const ShortestPathTree& tree = trees_[*v.demand];
    if (v.on_edge) {
      const std::size_t e = v.next_edge();
      const StreetPath rest = *tree.path_from(net_.edge(e).to);
      v.route = {v.node};
      v.route.insert(v.route.end(), rest.nodes.begin(), rest.nodes.end());
      v.route_edges = {e};
      v.route_edges.insert(v.route_edges.end(), rest.edges.begin(), rest.edges.end());
    } else {
      const StreetPath path = *tree.path_from(v.node);
      v.route = path.nodes;
      v.route_edges = path.edges;
      if (!v.need_wait && v.has_next()) {
        v.t_next = v.wait_left + net_.edge_time(v.route_edges[0]);
      }
    }
    v.pos = 0;
  }

  // Vehicles assigned to the node they stand on reach it at once.
  void settle() {
    for (std::size_t j = 0; j < v_.size(); ++j) {
      const Vehicle& v = v_[j];
      if (!v.retired && v.demand && !v.on_edge &&
          v.node == run_.demand_nodes[*v.demand]) {
        reach(j);
      }
    }
  }

  void reach(std::size_t j) {
    const std::size_t i = *v_[j].demand;
    reached_[i] = true;
    v_[j].retired = true;
    v_[j].demand.reset();
    for (Vehicle& other : v_) {
      if (other.demand == i) other.demand.reset();
    }
  }

  bool should_trigger(std::size_t step) const {
    switch (cfg_.mode) {
      case OtaMode::kOffline:
        return false;
      case OtaMode::kAllStep:
        // A lone vehicle has nothing to choose.
        return std::count_if(v_.begin(), v_.end(),
                             [](const Vehicle& v) { return !v.retired; }) > 1;
      case OtaMode::kStreet:
        return dominance([&](std::size_t j, std::size_t i) {
          const Start s = start_of(v_[j]);
          const StreetPath p = *trees_[i].path_from(s.node);
          return std::pair(s.edge_left_m + p.length, p.degree);
        });
      case OtaMode::kGeneral:
        return dominance([&](std::size_t j, std::size_t i) {
          const std::vector<double> t = travel_samples(j, i, kTriggerPurpose, step);
          const Eigen::Map<const Eigen::VectorXd> x(
              t.data(), static_cast<Eigen::Index>(t.size()));
          const double mean = x.mean();
          return std::pair(mean, (x.array() - mean).square().mean());
        });
    }
    return false;
  }

  // True iff some open demand has assigned j != j' with
  // first(j) <= gamma first(j') and second(j) <= second(j').
  template <class Measure>
  bool dominance(Measure measure) const {
    for (std::size_t i = 0; i < reached_.size(); ++i) {
      if (reached_[i]) continue;
      std::vector<std::pair<double, double>> m;
      for (std::size_t j = 0; j < v_.size(); ++j) {
        if (!v_[j].retired && v_[j].demand == i) m.push_back(measure(j, i));
      }
      for (std::size_t a = 0; a < m.size(); ++a) {
        for (std::size_t b = 0; b < m.size(); ++b) {
          if (a != b && m[a].first <= cfg_.gamma_trigger * m[b].first &&
              m[a].second <= m[b].second) {
            return true;
          }
        }
      }
    }
    return false;
  }

  OtaAssignment snapshot() const {
    OtaAssignment s(v_.size());
    for (std::size_t j = 0; j < v_.size(); ++j) s[j] = v_[j].demand;
    return s;
  }

  std::vector<OtaVehicle> snapshot_vehicles() const {
    std::vector<OtaVehicle> out(v_.size());
    for (std::size_t j = 0; j < v_.size(); ++j) {
      const Vehicle& v = v_[j];
      out[j].node = v.node;
      if (v.on_edge || (v.demand && v.has_next())) out[j].edge = v.next_edge();
      out[j].on_edge = v.on_edge;
      out[j].fraction = v.fraction;
      out[j].wait_left = v.wait_left;
      out[j].retired = v.retired;
    }
    return out;
  }

  const StreetNetwork& net_;
  OtaConfig cfg_;
  std::vector<ShortestPathTree> trees_;
  std::vector<Vehicle> v_;
  std::vector<bool> reached_;
  OtaRun run_;
  std::uint64_t calls_ = 0;
};

}  // namespace

std::string_view ota_mode_name(OtaMode mode) {
  switch (mode) {
    case OtaMode::kStreet:
      return "ota-street";
    case OtaMode::kGeneral:
      return "ota-general";
    case OtaMode::kOffline:
      return "offline";
    case OtaMode::kAllStep:
      return "all-step";
  }
  return "?";
}

OtaMode parse_ota_mode(std::string_view name) {
  for (OtaMode m : {OtaMode::kStreet, OtaMode::kGeneral, OtaMode::kOffline,
                    OtaMode::kAllStep}) {
    if (ota_mode_name(m) == name) return m;
  }
  if (name == "ota") return OtaMode::kStreet;
  throw ParameterError("unknown ota mode '" + std::string(name) + "'");
}

double ota_wait_sample(const StreetNetwork& net, std::size_t node,
                       std::uint64_t seed, std::size_t vehicle,
                       std::size_t arrival) {
  CounterStream rng(seed, StreamDomain::kNodeWait,
                    {static_cast<std::uint64_t>(vehicle),
                     static_cast<std::uint64_t>(arrival)});
  return sample_wait(net, node, rng);
}

OtaRun ota_run(const StreetNetwork& net, std::span<const std::size_t> vehicles,
               std::span<const std::size_t> demands, const OtaConfig& config) {
  if (demands.empty()) throw ParameterError("ota: no demands");
  if (vehicles.size() < demands.size()) {
    throw ParameterError("ota: needs at least as many vehicles as demands");
  }
  if (!(config.alpha > 0.0 && config.alpha <= 1.0)) {
    throw ParameterError("ota: alpha must lie in (0, 1]");
  }
  if (!(config.gamma_trigger > 0.0 && config.gamma_trigger < 1.0)) {
    throw ParameterError("ota: gamma_trigger must lie in (0, 1)");
  }
  if (config.n_s == 0 || config.grid_points == 0) {
    throw ParameterError("ota: n_s and grid_points must be positive");
  }
  for (std::size_t v : vehicles) net.check_node(v);
  for (std::size_t i = 0; i < demands.size(); ++i) {
    net.check_node(demands[i]);
    for (std::size_t k = 0; k < i; ++k) {
      if (demands[k] == demands[i]) throw ParameterError("ota: repeated demand node");
    }
  }
  const auto start = std::chrono::steady_clock::now();
  OtaRun run = Simulator(net, vehicles, demands, config).run();
  run.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return run;
}

std::pair<std::vector<std::size_t>, std::vector<std::size_t>> ota_placement(
    const StreetNetwork& net, std::size_t n_vehicles, std::size_t n_demands,
    std::uint64_t seed) {
  const std::size_t total = n_vehicles + n_demands;
  if (total > net.node_count()) {
    throw ParameterError("ota_placement: more agents than nodes");
  }
  std::vector<std::size_t> ids(net.node_count());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  CounterStream rng(seed, StreamDomain::kOtaPlacement);
  for (std::size_t i = 0; i < total; ++i) {
    std::swap(ids[i], ids[i + rng.below(ids.size() - i)]);
  }
  return {std::vector<std::size_t>(ids.begin(), ids.begin() + n_vehicles),
          std::vector<std::size_t>(ids.begin() + n_vehicles, ids.begin() + total)};
}

namespace {

nlohmann::json assignment_json(const OtaAssignment& a) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& d : a) out.push_back(d ? nlohmann::json(*d) : nlohmann::json());
  return out;
}

nlohmann::json finite_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json();
}

}  // namespace

std::string ota_log_ndjson(const OtaRun& run) {
  using nlohmann::json;
  std::string out;
  json start = {{"event", "start"},
                {"mode", ota_mode_name(run.config.mode)},
                {"alpha", run.config.alpha},
                {"gamma_trigger", run.config.gamma_trigger},
                {"seed", run.config.seed},
                {"n_s", run.config.n_s},
                {"grid_points", run.config.grid_points},
                {"vehicles", run.vehicle_nodes},
                {"demands", run.demand_nodes},
                {"assignment", assignment_json(run.assignments.front().second)}};
  out += start.dump() + "\n";
  for (const OtaStep& s : run.steps) {
    json vehicles = json::array();
    for (const OtaVehicle& v : s.vehicles) {
      vehicles.push_back({{"node", v.node},
                          {"edge", v.edge ? json(*v.edge) : json()},
                          {"on_edge", v.on_edge},
                          {"fraction", v.fraction},
                          {"wait_left", v.wait_left},
                          {"retired", v.retired}});
    }
    json t_next = json::array();
    for (double t : s.t_next) t_next.push_back(finite_or_null(t));
    json step = {{"event", "step"},
                 {"step", s.step},
                 {"t_step", s.t_step},
                 {"t_next", t_next},
                 {"vehicles", vehicles},
                 {"reached", s.reached},
                 {"triggered", s.triggered},
                 {"assignment", assignment_json(s.assignment)}};
    out += step.dump() + "\n";
  }
  json end = {{"event", "end"},
              {"arrival_time", run.arrival_time},
              {"assignment_count", run.assignment_count},
              {"trigger_steps", run.trigger_steps}};
  out += end.dump() + "\n";
  return out;
}

}  // namespace cvarsel
