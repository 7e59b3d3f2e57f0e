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


// Online Triggering Assignment of vehicles to demand locations on a street
// network.
//
// The simulator advances all moving vehicles to the next intersection event
// (T_step = min_j t_next_j), samples real waits on arrival, and re-runs the
// CVaR assignment (SGA over the vehicle/demand partition matroid) when the
// mode's trigger fires:
//
//   kStreet   some demand has assigned vehicles j, j' with
//             len(P_j) <= gamma len(P_j') and deg(P_j) <= deg(P_j').
//   kGeneral  same with sampled mean travel time and its variance.
//   kOffline  never.
//   kAllStep  every step.

#ifndef CVARSEL_OTA_H_
#define CVARSEL_OTA_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cvarsel/streetnet.h"

namespace cvarsel {

enum class OtaMode { kStreet, kGeneral, kOffline, kAllStep };

// "ota-street", "ota-general", "offline", "all-step".
std::string_view ota_mode_name(OtaMode mode);
// Throws ParameterError for unknown names.
OtaMode parse_ota_mode(std::string_view name);

struct OtaConfig {
  double alpha = 0.1;
  double gamma_trigger = 0.5;
  std::uint64_t seed = 1;
  OtaMode mode = OtaMode::kStreet;
  std::size_t n_s = 200;           // scenarios per assignment
  std::size_t grid_points = 50;    // Delta = Gamma / grid_points
  std::size_t max_steps = 100000;  // guard
  bool drop_idle_picks = true;
};

// vehicle -> demand index, empty when idle or retired.
using OtaAssignment = std::vector<std::optional<std::size_t>>;

struct OtaVehicle {
  std::size_t node = 0;               // last intersection reached
  std::optional<std::size_t> edge;    // next edge on the route
  bool on_edge = false;               // wait served, driving `edge`
  double fraction = 0.0;              // share of `edge` already driven
  double wait_left = 0.0;
  bool retired = false;               // reached its demand
};

struct OtaStep {
  std::size_t step = 0;  // 1-based
  double t_step = 0.0;
  // t_next of every vehicle that moved this step; +inf for the others.
  std::vector<double> t_next;
  std::vector<OtaVehicle> vehicles;  // after the step
  std::vector<bool> reached;
  bool triggered = false;
  OtaAssignment assignment;  // in force after the step
};

struct OtaRun {
  OtaConfig config;
  std::vector<std::size_t> vehicle_nodes;
  std::vector<std::size_t> demand_nodes;
  // (step, assignment) after each SGA call; step 0 is the initial one.
  std::vector<std::pair<std::size_t, OtaAssignment>> assignments;
  std::vector<std::size_t> trigger_steps;
  std::vector<OtaStep> steps;
  double arrival_time = 0.0;
  std::size_t assignment_count = 0;
  double wall_time_s = 0.0;  // not part of any serialized log
};

// Throws ParameterError when R < N, alpha or gamma is out of range, or
// nodes repeat among demands; UnreachableError when an unreached demand
// cannot be reached by any remaining vehicle; InstanceTooLargeError when
// max_steps is exceeded.
OtaRun ota_run(const StreetNetwork& net, std::span<const std::size_t> vehicles,
               std::span<const std::size_t> demands, const OtaConfig& config);

// Wait of `vehicle` at its arrival-th intersection (0 = start node).
double ota_wait_sample(const StreetNetwork& net, std::size_t node,
                       std::uint64_t seed, std::size_t vehicle,
                       std::size_t arrival);

// Distinct random nodes: R vehicle starts followed by N demand locations.
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> ota_placement(
    const StreetNetwork& net, std::size_t n_vehicles, std::size_t n_demands,
    std::uint64_t seed);

// Newline-delimited JSON: a start event, one event per step, an end event.
std::string ota_log_ndjson(const OtaRun& run);

}  // namespace cvarsel

#endif  // CVARSEL_OTA_H_
