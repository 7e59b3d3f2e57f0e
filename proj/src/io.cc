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


#include "cvarsel/io.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "cvarsel/errors.h"

namespace cvarsel {
namespace {

[[noreturn]] void fail(std::string_view schema, const std::string& what) {
  throw InstanceError(std::string(schema) + ": " + what);
}

const Json& field(const Json& j, std::string_view schema, const char* name) {
  if (!j.is_object() || !j.contains(name)) {
    fail(schema, std::string("missing field '") + name + "'");
  }
  return j.at(name);
}

template <class T>
T get(const Json& j, std::string_view schema, const char* name) {
  const Json& v = field(j, schema, name);
  try {
    return v.get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(schema, std::string("field '") + name + "': " + e.what());
  }
}

double get_number(const Json& j, std::string_view schema, const char* name) {
  const Json& v = field(j, schema, name);
  if (!v.is_number()) fail(schema, std::string("field '") + name + "' must be a number");
  return v.get<double>();
}

std::size_t get_count(const Json& j, std::string_view schema, const char* name) {
  const Json& v = field(j, schema, name);
  if (!v.is_number_unsigned()) {
    fail(schema, std::string("field '") + name + "' must be a non-negative integer");
  }
  return v.get<std::size_t>();
}

void expect_schema(const Json& j, std::string_view schema) {
  if (schema_of(j) != schema) {
    fail(schema, "document has schema '" + schema_of(j) + "'");
  }
}

Json matrix_rows(const Eigen::MatrixXd& m) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(i, k));
    out.push_back(std::move(row));
  }
  return out;
}

Eigen::MatrixXd read_matrix(const Json& j, std::string_view schema,
                            const char* name, std::size_t rows,
                            std::size_t cols) {
  const Json& v = field(j, schema, name);
  if (!v.is_array() || v.size() != rows) {
    fail(schema, std::string("field '") + name + "' needs " +
                     std::to_string(rows) + " rows");
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (std::size_t i = 0; i < rows; ++i) {
    if (!v[i].is_array() || v[i].size() != cols) {
      fail(schema, std::string("field '") + name + "' row " + std::to_string(i) +
                       " needs " + std::to_string(cols) + " entries");
    }
    for (std::size_t k = 0; k < cols; ++k) {
      if (!v[i][k].is_number()) fail(schema, std::string("field '") + name + "' is not numeric");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = v[i][k].get<double>();
    }
  }
  return m;
}

Json points(const Eigen::Matrix2Xd& p) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < p.cols(); ++i) out.push_back({p(0, i), p(1, i)});
  return out;
}

Eigen::Matrix2Xd read_points(const Json& j, std::string_view schema,
                             const char* name, std::size_t count) {
  return read_matrix(j, schema, name, count, 2).transpose();
}

}  // namespace

std::string schema_of(const Json& j) {
  if (!j.is_object() || !j.contains("schema") || !j.at("schema").is_string()) {
    throw InstanceError("document has no \"schema\" string");
  }
  return j.at("schema").get<std::string>();
}

Json mod_to_json(const ModInstance& inst) {
  Json j;
  j["schema"] = kModSchema;
  j["seed"] = inst.seed;
  j["n_demands"] = inst.n_demands;
  j["n_vehicles"] = inst.n_vehicles;
  j["demands"] = points(inst.demands);
  j["vehicles"] = points(inst.vehicles);
  j["mean_eff"] = matrix_rows(inst.mean_eff);
  j["eff_halfwidth"] = matrix_rows(inst.eff_halfwidth);
  return j;
}

ModInstance mod_from_json(const Json& j) {
  expect_schema(j, kModSchema);
  ModInstance inst;
  inst.seed = get<std::uint64_t>(j, kModSchema, "seed");
  inst.n_demands = get_count(j, kModSchema, "n_demands");
  inst.n_vehicles = get_count(j, kModSchema, "n_vehicles");
  inst.demands = read_points(j, kModSchema, "demands", inst.n_demands);
  inst.vehicles = read_points(j, kModSchema, "vehicles", inst.n_vehicles);
  inst.mean_eff =
      read_matrix(j, kModSchema, "mean_eff", inst.n_demands, inst.n_vehicles);
  inst.eff_halfwidth =
      read_matrix(j, kModSchema, "eff_halfwidth", inst.n_demands, inst.n_vehicles);
  inst.validate();
  return inst;
}

Json coverage_to_json(const CoverageInstance& inst) {
  Json j;
  j["schema"] = kCoverageSchema;
  j["seed"] = inst.seed;
  j["budget"] = inst.budget;
  j["height"] = inst.grid.height();
  j["width"] = inst.grid.width();
  Json obstacles = Json::array();
  for (const Rect& r : inst.obstacles) {
    obstacles.push_back(
        {{"row", r.row}, {"col", r.col}, {"height", r.height}, {"width", r.width}});
  }
  j["obstacles"] = std::move(obstacles);
  Json candidates = Json::array();
  for (const Cell& c : inst.candidates) candidates.push_back({{"row", c.row}, {"col", c.col}});
  j["candidates"] = std::move(candidates);
  Json cells = Json::array();
  for (const CellMask& f : inst.footprints) cells.push_back(f.count());
  j["footprint_cells"] = std::move(cells);
  Json p = Json::array();
  for (Eigen::Index i = 0; i < inst.success_prob.size(); ++i) p.push_back(inst.success_prob[i]);
  j["success_prob"] = std::move(p);
  return j;
}

CoverageInstance coverage_from_json(const Json& j) {
  constexpr std::string_view s = kCoverageSchema;
  expect_schema(j, s);
  std::vector<Rect> obstacles;
  for (const Json& r : field(j, s, "obstacles")) {
    obstacles.push_back({get<int>(r, s, "row"), get<int>(r, s, "col"),
                         get<int>(r, s, "height"), get<int>(r, s, "width")});
  }
  std::vector<Cell> candidates;
  for (const Json& c : field(j, s, "candidates")) {
    candidates.push_back({get<int>(c, s, "row"), get<int>(c, s, "col")});
  }
  CoverageInstance inst;
  try {
    inst = coverage_from_candidates(get<int>(j, s, "width"), get<int>(j, s, "height"),
                                    obstacles, std::move(candidates),
                                    get_count(j, s, "budget"),
                                    get<std::uint64_t>(j, s, "seed"));
  } catch (const ParameterError& e) {
    fail(s, e.what());
  }
  const Json& p = field(j, s, "success_prob");
  if (!p.is_array() || p.size() != inst.candidate_count()) {
    fail(s, "field 'success_prob' needs one entry per candidate");
  }
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (!p[i].is_number()) fail(s, "field 'success_prob' is not numeric");
    const double v = p[i].get<double>();
    if (!(v >= 0.0 && v <= 1.0)) fail(s, "success probabilities must lie in [0, 1]");
    inst.success_prob[static_cast<Eigen::Index>(i)] = v;
  }
  if (j.contains("footprint_cells")) {
    const Json& cells = j.at("footprint_cells");
    if (!cells.is_array() || cells.size() != inst.candidate_count()) {
      fail(s, "field 'footprint_cells' needs one entry per candidate");
    }
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (cells[i] != inst.footprint_size(i)) {
        fail(s, "footprint of candidate " + std::to_string(i) +
                    " disagrees with the grid");
      }
    }
  }
  return inst;
}

Json streetnet_to_json(const StreetNetwork& net) {
  Json j;
  j["schema"] = kStreetSchema;
  j["beta1"] = net.beta1();
  j["beta2"] = net.beta2();
  j["t_max_factor"] = net.t_max_factor();
  Json nodes = Json::array();
  for (std::size_t v = 0; v < net.node_count(); ++v) {
    nodes.push_back({{"id", v}, {"x", net.nodes()[v].x}, {"y", net.nodes()[v].y}});
  }
  j["nodes"] = std::move(nodes);
  Json edges = Json::array();
  for (const StreetEdge& e : net.edges()) {
    edges.push_back({{"from", e.from}, {"to", e.to}, {"len_m", e.len_m},
                     {"maxv_mps", e.maxv_mps}});
  }
  j["edges"] = std::move(edges);
  return j;
}

StreetNetwork streetnet_from_json(const Json& j) {
  constexpr std::string_view s = kStreetSchema;
  expect_schema(j, s);
  std::vector<StreetNode> nodes;
  for (const Json& n : field(j, s, "nodes")) {
    if (get_count(n, s, "id") != nodes.size()) {
      fail(s, "node ids must be 0, 1, 2, ... in order");
    }
    nodes.push_back({get_number(n, s, "x"), get_number(n, s, "y")});
  }
  std::vector<StreetEdge> edges;
  for (const Json& e : field(j, s, "edges")) {
    edges.push_back({get_count(e, s, "from"), get_count(e, s, "to"),
                     get_number(e, s, "len_m"), get_number(e, s, "maxv_mps")});
  }
  try {
    return StreetNetwork(std::move(nodes), std::move(edges),
                         get_number(j, s, "beta1"), get_number(j, s, "beta2"),
                         get_number(j, s, "t_max_factor"));
  } catch (const InstanceError&) {
    throw;
  } catch (const Error& e) {
    fail(s, e.what());
  }
}

Json result_to_json(const SgaResult& result, const GroundSet& x,
                    const RiskParams& p) {
  auto ids = [](const ElementSet& set) {
    Json out = Json::array();
    for (ElementId e : set) out.push_back(e.index);
    return out;
  };
  Json j;
  j["schema"] = kResultSchema;
  j["alpha"] = p.alpha;
  j["gamma_cap"] = p.gamma_cap;
  j["delta_step"] = p.delta_step;
  j["epsilon"] = p.epsilon ? Json(*p.epsilon) : Json();
  j["delta_conf"] = p.delta_conf ? Json(*p.delta_conf) : Json();
  j["selected"] = ids(result.selected);
  Json labels = Json::array();
  for (ElementId e : result.selected) labels.push_back(x.label(e));
  j["selected_labels"] = std::move(labels);
  j["tau_g"] = result.tau_g;
  j["h_value"] = result.h_value;
  j["best_index"] = result.best_index;
  j["eval_count"] = result.eval_count;
  Json trace = Json::array();
  for (const SgaTraceEntry& t : result.trace) {
    trace.push_back({{"tau", t.tau}, {"h", t.h}, {"set", ids(t.set)}});
  }
  j["trace"] = std::move(trace);
  return j;
}

Json certificate_to_json(const Certificate& c) {
  return Json{{"k_f", c.k_f},
              {"alpha", c.alpha},
              {"gamma_cap", c.gamma_cap},
              {"delta_step", c.delta_step},
              {"epsilon", c.epsilon},
              {"additive_term", c.additive_term},
              {"optimum_upper_bound", c.optimum_upper_bound}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error reading '" + path + "'");
  return buf.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("error writing '" + path + "'");
}

Json read_json(const std::string& path) {
  const std::string text = read_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw InstanceError("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace cvarsel
