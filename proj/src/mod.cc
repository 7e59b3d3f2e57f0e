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


#include "cvarsel/mod.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cvarsel/errors.h"
#include "cvarsel/rng.h"

namespace cvarsel {
namespace {

constexpr double kMinDistance = 1e-9;

double min_distance(const Eigen::Matrix2Xd& a, const Eigen::Matrix2Xd& b) {
  double best = INFINITY;
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      best = std::min(best, (a.col(i) - b.col(j)).norm());
    }
  }
  return best;
}

}  // namespace

double ModInstance::eff_lower(std::size_t i, std::size_t j) const {
  const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
  return std::max(0.0, mean_eff(r, c) - eff_halfwidth(r, c));
}

double ModInstance::eff_upper(std::size_t i, std::size_t j) const {
  const auto r = static_cast<Eigen::Index>(i), c = static_cast<Eigen::Index>(j);
  return mean_eff(r, c) + eff_halfwidth(r, c);
}

void ModInstance::validate() const {
  const auto n = static_cast<Eigen::Index>(n_demands);
  const auto r = static_cast<Eigen::Index>(n_vehicles);
  if (n_demands == 0 || n_vehicles == 0) {
    throw InstanceError("mod instance needs N >= 1 and R >= 1");
  }
  if (demands.cols() != n || vehicles.cols() != r || mean_eff.rows() != n ||
      mean_eff.cols() != r || eff_halfwidth.rows() != n ||
      eff_halfwidth.cols() != r) {
    throw InstanceError("mod instance: matrix shapes disagree with N, R");
  }
  if (!mean_eff.allFinite() || !eff_halfwidth.allFinite() ||
      (mean_eff.array() <= 0.0).any() || (eff_halfwidth.array() < 0.0).any()) {
    throw InstanceError("mod instance: efficiencies must be finite, mean > 0, "
                        "halfwidth >= 0");
  }
}

ModInstance mod_from_positions(Eigen::Matrix2Xd demands,
                               Eigen::Matrix2Xd vehicles, std::uint64_t seed) {
  ModInstance inst;
  inst.n_demands = static_cast<std::size_t>(demands.cols());
  inst.n_vehicles = static_cast<std::size_t>(vehicles.cols());
  inst.seed = seed;
  inst.demands = std::move(demands);
  inst.vehicles = std::move(vehicles);
  if (inst.n_demands == 0 || inst.n_vehicles == 0) {
    throw ParameterError("mod instance needs N >= 1 and R >= 1");
  }
  if (min_distance(inst.demands, inst.vehicles) < kMinDistance) {
    throw InstanceError("mod instance: a vehicle coincides with a demand");
  }
  const auto n = static_cast<Eigen::Index>(inst.n_demands);
  const auto r = static_cast<Eigen::Index>(inst.n_vehicles);
  inst.mean_eff.resize(n, r);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < r; ++j) {
      inst.mean_eff(i, j) =
          kModSide / (inst.demands.col(i) - inst.vehicles.col(j)).norm();
    }
  }
  const double max_mean = inst.mean_eff.maxCoeff();
  inst.eff_halfwidth = inst.mean_eff.array().pow(2.5) / max_mean;
  return inst;
}

ModInstance mod_generate(std::size_t n_demands, std::size_t n_vehicles,
                         std::uint64_t seed) {
  if (n_demands == 0) throw ParameterError("mod_generate: N must be >= 1");
  if (n_vehicles < n_demands) throw ParameterError("mod_generate: R must be >= N");
  for (int attempt = 0; attempt < kModMaxAttempts; ++attempt) {
    CounterStream rng(seed, StreamDomain::kModPositions,
                      {static_cast<std::uint64_t>(attempt)});
    Eigen::Matrix2Xd d(2, static_cast<Eigen::Index>(n_demands));
    Eigen::Matrix2Xd v(2, static_cast<Eigen::Index>(n_vehicles));
    for (Eigen::Index i = 0; i < d.cols(); ++i) {
      d(0, i) = rng.uniform(0.0, kModSide);
      d(1, i) = rng.uniform(0.0, kModSide);
    }
    for (Eigen::Index j = 0; j < v.cols(); ++j) {
      v(0, j) = rng.uniform(0.0, kModSide);
      v(1, j) = rng.uniform(0.0, kModSide);
    }
    if (min_distance(d, v) < kMinDistance) continue;
    return mod_from_positions(std::move(d), std::move(v), seed);
  }
  throw InstanceError("mod_generate: no valid layout after " +
                      std::to_string(kModMaxAttempts) + " attempts");
}

GroundSet mod_ground_set(const ModInstance& inst) {
  std::vector<std::string> labels;
  labels.reserve(inst.element_count());
  for (std::size_t i = 0; i < inst.n_demands; ++i) {
    for (std::size_t j = 0; j < inst.n_vehicles; ++j) {
      labels.push_back("d" + std::to_string(i) + ":v" + std::to_string(j));
    }
  }
  return GroundSet(inst.element_count(), std::move(labels));
}

Matroid mod_matroid(const ModInstance& inst) {
  std::vector<std::size_t> block(inst.element_count());
  for (std::size_t e = 0; e < block.size(); ++e) block[e] = e % inst.n_vehicles;
  return Matroid::partition(mod_ground_set(inst), std::move(block),
                            std::vector<std::size_t>(inst.n_vehicles, 1));
}

double mod_sample(const ModInstance& inst, ElementId e, std::size_t scenario,
                  std::uint64_t seed) {
  if (e.index >= inst.element_count()) {
    throw InvalidElementError("mod element " + std::to_string(e.index) +
                              " out of range");
  }
  const std::size_t i = inst.demand_of(e), j = inst.vehicle_of(e);
  CounterStream rng(seed, StreamDomain::kModEfficiency,
                    {static_cast<std::uint64_t>(scenario), e.index});
  return rng.uniform(inst.eff_lower(i, j), inst.eff_upper(i, j));
}

double mod_utility(const ModInstance& inst, const ElementSet& s,
                   std::size_t scenario, std::uint64_t seed) {
  if (!mod_matroid(inst).contains(s)) {
    throw MatroidViolationError("mod_utility: a vehicle is assigned twice");
  }
  std::vector<double> best(inst.n_demands, 0.0);
  for (ElementId e : s) {
    double& b = best[inst.demand_of(e)];
    b = std::max(b, mod_sample(inst, e, scenario, seed));
  }
  double total = 0.0;
  for (double b : best) total += b;
  return total;
}

double mod_gamma(const ModInstance& inst) {
  double top = 0.0;
  for (std::size_t i = 0; i < inst.n_demands; ++i) {
    for (std::size_t j = 0; j < inst.n_vehicles; ++j) {
      top = std::max(top, inst.eff_upper(i, j));
    }
  }
  return static_cast<double>(inst.n_demands) * top;
}

AssignmentTable mod_scenario_table(const ModInstance& inst, std::size_t n_s,
                                   std::uint64_t seed) {
  if (n_s == 0) throw ParameterError("mod_scenario_table: n_s must be >= 1");
  const std::size_t n = inst.element_count();
  Eigen::MatrixXd samples(static_cast<Eigen::Index>(n_s),
                          static_cast<Eigen::Index>(n));
  std::vector<std::size_t> group(n);
  for (std::size_t e = 0; e < n; ++e) {
    group[e] = inst.demand_of(ElementId(e));
    for (std::size_t k = 0; k < n_s; ++k) {
      samples(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(e)) =
          mod_sample(inst, ElementId(e), k, seed);
    }
  }
  return AssignmentTable(std::move(samples), std::move(group), inst.n_demands,
                         seed);
}

}  // namespace cvarsel
