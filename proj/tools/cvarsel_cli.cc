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


// Experiment harness: offline studies on the two case-study families, the
// online assignment comparison on a street network, and a solver for
// instance files. Every output file starts with a header naming its schema
// and the full resolved configuration; output paths are left out so reruns
// into another directory produce the same bytes.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "cvarsel/coverage.h"
#include "cvarsel/errors.h"
#include "cvarsel/io.h"
#include "cvarsel/mod.h"
#include "cvarsel/ota.h"
#include "cvarsel/risk.h"
#include "cvarsel/sga.h"
#include "cvarsel/streetnet.h"

namespace {

using namespace cvarsel;

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInstance = 3;
constexpr int kExitGuard = 4;

const std::vector<double> kDefaultAlphaGrid = {0.01, 0.1, 0.2, 0.3, 0.4, 0.5,
                                               0.6,  0.7, 0.8, 0.9, 1.0};

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

template <std::unsigned_integral T>
std::string fmt(T x) {
  return std::to_string(x);
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i > 0) out += sep;
    out += parts[i];
  }
  return out;
}

std::string join_ids(const ElementSet& s) {
  std::vector<std::string> parts;
  for (ElementId e : s) parts.push_back(std::to_string(e.index));
  return join(parts, " ");
}

std::string join_numbers(const std::vector<double>& v) {
  std::vector<std::string> parts;
  for (double x : v) parts.push_back(fmt(x));
  return join(parts, ",");
}

// Ordered key=value pairs describing one command invocation.
class Config {
 public:
  explicit Config(std::string command) : command_(std::move(command)) {}

  void set(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
  }
  void set(const std::string& key, double value) { set(key, fmt(value)); }
  void set(const std::string& key, std::size_t value) { set(key, fmt(value)); }

  const std::string& command() const { return command_; }

  std::string csv_header(std::string_view schema) const {
    std::string out = "# cvarsel " + command_ + " schema=" + std::string(schema) + "\n";
    for (const auto& [k, v] : entries_) out += "# " + k + "=" + v + "\n";
    return out;
  }

  Json json() const {
    Json j;
    j["command"] = command_;
    for (const auto& [k, v] : entries_) j[k] = v;
    return j;
  }

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> entries_;
};

class Csv {
 public:
  Csv(const Config& cfg, std::string_view schema,
      const std::vector<std::string>& columns)
      : text_(cfg.csv_header(schema) + join(columns, ",") + "\n"),
        width_(columns.size()) {}

  void row(const std::vector<std::string>& cells) {
    if (cells.size() != width_) throw Error("csv row width mismatch");
    std::vector<std::string> quoted;
    for (const std::string& c : cells) {
      quoted.push_back(c.find_first_of(",\"") == std::string::npos ? c : quote(c));
    }
    text_ += join(quoted, ",") + "\n";
  }
  const std::string& text() const { return text_; }

 private:
  static std::string quote(const std::string& c) {
    std::string out = "\"";
    for (char ch : c) {
      if (ch == '"') out += '"';
      out += ch;
    }
    return out + "\"";
  }

  std::string text_;
  std::size_t width_;
};

// Writes `content` to `path`, or to stdout when the path is empty.
void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
  } else {
    write_file(path, content);
  }
}

std::filesystem::path output_dir(const std::string& out) {
  const std::filesystem::path dir = out.empty() ? "." : out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  return dir;
}

// Runs job(i) for i in [0, n) on up to `threads` workers.
template <class Job>
void fan_out(std::size_t n, unsigned threads, Job job) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) job(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) job(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// Flags shared by the offline studies and solve.
struct RiskOptions {
  std::optional<double> alpha;
  std::vector<double> alpha_grid;
  std::optional<std::size_t> n_s;
  std::optional<double> eps;
  std::optional<double> delta_conf;
  std::optional<double> gamma_cap;
  std::optional<double> delta_step;

  void add_to(CLI::App* app, bool grid) {
    app->add_option("--alpha", alpha, "risk level in (0, 1]");
    if (grid) {
      app->add_option("--alpha-grid", alpha_grid, "comma-separated risk levels")
          ->delimiter(',')
          ->excludes("--alpha");
    }
    auto* ns = app->add_option("--ns", n_s, "scenario count");
    app->add_option("--eps", eps, "sampling accuracy; sizes n_s with --delta-conf")
        ->excludes(ns);
    app->add_option("--delta-conf", delta_conf, "sampling confidence")
        ->excludes(ns);
    app->add_option("--gamma-cap", gamma_cap, "upper bound on tau");
    app->add_option("--delta-step", delta_step, "tau grid separation");
  }

  std::vector<double> alphas() const {
    std::vector<double> a = alpha ? std::vector<double>{*alpha}
                                  : (alpha_grid.empty() ? kDefaultAlphaGrid : alpha_grid);
    for (double x : a) {
      if (!(x > 0.0 && x <= 1.0)) throw ParameterError("alpha must lie in (0, 1]");
    }
    return a;
  }

  // Resolves n_s and the sampling pair; records both in cfg.
  std::size_t resolve_samples(double gamma, RiskParams& p, Config& cfg,
                              std::size_t fallback) const {
    if (eps.has_value() != delta_conf.has_value()) {
      throw ParameterError("--eps and --delta-conf must be given together");
    }
    std::size_t n = n_s.value_or(fallback);
    if (eps) {
      n = required_samples(gamma, *eps, *delta_conf);
      p.epsilon = eps;
      p.delta_conf = delta_conf;
      cfg.set("eps", *eps);
      cfg.set("delta_conf", *delta_conf);
    }
    if (n == 0) throw ParameterError("--ns must be positive");
    cfg.set("n_s", n);
    return n;
  }
};

RiskParams base_params(const RiskOptions& o, double default_gamma, Config& cfg) {
  RiskParams p;
  p.gamma_cap = o.gamma_cap.value_or(default_gamma);
  p.delta_step = o.delta_step.value_or(std::min(1.0, p.gamma_cap));
  cfg.set("gamma_cap", p.gamma_cap);
  cfg.set("delta_step", p.delta_step);
  return p;
}

struct KfValue {
  double k_f = 1.0;
  std::string source;
};

KfValue curvature_of(const ScenarioTable& table, const GroundSet& x) {
  try {
    return {mean_utility_curvature(table, x).value, "mean-utility"};
  } catch (const ZeroSingletonError&) {
    return {1.0, "fallback"};
  }
}

struct AlphaRun {
  double alpha = 1.0;
  RiskParams params;
  SgaResult sga;
  Certificate cert;
  Eigen::VectorXd fit_utility;
  Eigen::VectorXd eval_utility;
};

double mean_of(const Eigen::VectorXd& v) { return v.mean(); }

double cvar_of(const Eigen::VectorXd& v, double alpha) {
  return estimate_cvar(std::span<const double>(v.data(), static_cast<std::size_t>(v.size())),
                       alpha)
      .cvar;
}

// The offline study shared by mod-offline and coverage.
struct Study {
  const ScenarioTable* fit = nullptr;
  const ScenarioTable* eval = nullptr;
  const Matroid* matroid = nullptr;
  const GroundSet* x = nullptr;
  RiskParams base;
  std::vector<double> alphas;
  unsigned threads = 1;
};

std::vector<AlphaRun> run_study(const Study& s, double k_f) {
  std::vector<AlphaRun> runs(s.alphas.size());
  fan_out(runs.size(), s.threads, [&](std::size_t i) {
    AlphaRun& r = runs[i];
    r.alpha = s.alphas[i];
    r.params = s.base;
    r.params.alpha = r.alpha;
    r.sga = sga_solve(*s.fit, *s.matroid, *s.x, r.params);
    r.cert = certificate(r.sga, k_f, r.params);
    r.fit_utility = s.fit->values(r.sga.selected);
    r.eval_utility = s.eval->values(r.sga.selected);
  });
  return runs;
}

void write_study(const std::filesystem::path& dir, const Config& cfg,
                 const Study& s, const std::vector<AlphaRun>& runs,
                 const KfValue& kf) {
  Csv h(cfg, "h-vs-alpha-v1",
        {"alpha", "tau_g", "h_value", "optimum_upper_bound", "eval_count",
         "eval_count_bound", "selected", "labels"});
  Csv trace(cfg, "h-trace-v1", {"alpha", "tau", "h"});
  Csv samples(cfg, "utility-samples-v1", {"alpha", "scenario", "utility"});
  Csv summary(cfg, "utility-summary-v1",
              {"alpha", "eval_mean", "eval_cvar_alpha", "eval_cvar_0.1", "fit_mean",
               "fit_cvar_alpha", "fit_cvar_0.1"});
  Csv additive(cfg, "additive-term-v1",
               {"alpha", "k_f", "k_f_source", "gamma_cap", "additive_term"});
  const std::size_t n_s = s.fit->scenario_count();
  for (const AlphaRun& r : runs) {
    std::vector<std::string> labels;
    for (ElementId e : r.sga.selected) labels.push_back(s.x->label(e));
    h.row({fmt(r.alpha), fmt(r.sga.tau_g), fmt(r.sga.h_value),
           fmt(r.cert.optimum_upper_bound), fmt(r.sga.eval_count),
           fmt(eval_count_bound(*s.x, r.params, n_s)), join_ids(r.sga.selected),
           join(labels, " ")});
    for (const SgaTraceEntry& t : r.sga.trace) {
      trace.row({fmt(r.alpha), fmt(t.tau), fmt(t.h)});
    }
    for (Eigen::Index k = 0; k < r.eval_utility.size(); ++k) {
      samples.row({fmt(r.alpha), fmt(static_cast<std::size_t>(k)), fmt(r.eval_utility[k])});
    }
    summary.row({fmt(r.alpha), fmt(mean_of(r.eval_utility)),
                 fmt(cvar_of(r.eval_utility, r.alpha)), fmt(cvar_of(r.eval_utility, 0.1)),
                 fmt(s.fit->mean_value(r.sga.selected.view())),
                 fmt(cvar_of(r.fit_utility, r.alpha)), fmt(cvar_of(r.fit_utility, 0.1))});
    additive.row({fmt(r.alpha), fmt(kf.k_f), kf.source, fmt(r.params.gamma_cap),
                  fmt(additive_term(kf.k_f, r.params.gamma_cap, r.alpha))});
  }
  write_file((dir / "h_vs_alpha.csv").string(), h.text());
  write_file((dir / "h_trace.csv").string(), trace.text());
  write_file((dir / "utility_samples.csv").string(), samples.text());
  write_file((dir / "utility_summary.csv").string(), summary.text());
  write_file((dir / "additive_term.csv").string(), additive.text());
}

// Scenario tables for evaluation are drawn from a seed derived from --seed.
std::uint64_t eval_seed(std::uint64_t seed) { return mix64(seed ^ kGolden); }

struct Common {
  std::uint64_t seed = 1;
  std::string out;
  unsigned threads = 1;
  bool record_timing = false;
};

void add_common(CLI::App* app, Common& c, std::uint64_t default_seed) {
  c.seed = default_seed;
  app->add_option("--seed", c.seed, "random seed")->capture_default_str();
  app->add_option("--out", c.out, "output path");
  app->add_option("--threads", c.threads, "worker threads")->capture_default_str();
}

std::vector<Rect> obstacles_named(const std::string& name) {
  if (name == "default") return default_coverage_obstacles();
  if (name == "none") return {};
  throw ParameterError("--obstacles must be default or none");
}

// ---------------------------------------------------------------- mod-offline

struct ModOptions {
  Common common;
  RiskOptions risk;
  std::size_t demands = 4;
  std::size_t vehicles = 6;
  std::string instance;
};

void run_mod_offline(const ModOptions& o) {
  Config cfg("mod-offline");
  cfg.set("seed", fmt(o.common.seed));
  const ModInstance inst = o.instance.empty()
                               ? mod_generate(o.demands, o.vehicles, o.common.seed)
                               : mod_from_json(read_json(o.instance));
  cfg.set("instance", o.instance.empty() ? "generated" : o.instance);
  cfg.set("demands", inst.n_demands);
  cfg.set("vehicles", inst.n_vehicles);
  cfg.set("instance_seed", fmt(inst.seed));
  Study s;
  s.alphas = o.risk.alphas();
  cfg.set("alpha_grid", join_numbers(s.alphas));
  s.base = base_params(o.risk, mod_gamma(inst), cfg);
  const std::size_t n_s = o.risk.resolve_samples(s.base.gamma_cap, s.base, cfg, 1000);
  cfg.set("eval_seed", fmt(eval_seed(o.common.seed)));
  const AssignmentTable fit = mod_scenario_table(inst, n_s, o.common.seed);
  const AssignmentTable eval = mod_scenario_table(inst, n_s, eval_seed(o.common.seed));
  const GroundSet x = mod_ground_set(inst);
  const Matroid m = mod_matroid(inst);
  s.fit = &fit;
  s.eval = &eval;
  s.matroid = &m;
  s.x = &x;
  s.threads = o.common.threads;
  const KfValue kf = curvature_of(fit, x);
  const std::vector<AlphaRun> runs = run_study(s, kf.k_f);
  const auto dir = output_dir(o.common.out);
  write_study(dir, cfg, s, runs, kf);
  write_file((dir / "instance.json").string(), dump(mod_to_json(inst)));
}

// ------------------------------------------------------------------- coverage

struct CoverageOptions {
  Common common;
  RiskOptions risk;
  int width = 20;
  int height = 20;
  std::size_t candidates = 8;
  std::size_t budget = 4;
  std::string obstacles = "default";
  bool exact = false;
  std::string instance;
};

void run_coverage(const CoverageOptions& o) {
  Config cfg("coverage");
  cfg.set("seed", fmt(o.common.seed));
  const CoverageInstance inst =
      o.instance.empty()
          ? coverage_generate(o.width, o.height, obstacles_named(o.obstacles),
                              o.candidates, o.budget, o.common.seed)
          : coverage_from_json(read_json(o.instance));
  cfg.set("instance", o.instance.empty() ? "generated" : o.instance);
  if (o.instance.empty()) cfg.set("obstacles", o.obstacles);
  cfg.set("height", static_cast<std::size_t>(inst.grid.height()));
  cfg.set("width", static_cast<std::size_t>(inst.grid.width()));
  cfg.set("candidates", inst.candidate_count());
  cfg.set("budget", inst.budget);
  cfg.set("instance_seed", fmt(inst.seed));
  cfg.set("scenarios", o.exact ? "exact" : "sampled");
  Study s;
  s.alphas = o.risk.alphas();
  cfg.set("alpha_grid", join_numbers(s.alphas));
  s.base = base_params(o.risk, static_cast<double>(inst.free_cells()), cfg);
  std::optional<CoverageTable> fit, eval;
  if (o.exact) {
    if (o.risk.n_s || o.risk.eps) {
      throw ParameterError("--exact does not take --ns, --eps or --delta-conf");
    }
    fit.emplace(CoverageTable::exact(inst));
    eval.emplace(CoverageTable::exact(inst));
  } else {
    const std::size_t n_s = o.risk.resolve_samples(s.base.gamma_cap, s.base, cfg, 1000);
    cfg.set("eval_seed", fmt(eval_seed(o.common.seed)));
    fit.emplace(CoverageTable::sampled(inst, n_s, o.common.seed));
    eval.emplace(CoverageTable::sampled(inst, n_s, eval_seed(o.common.seed)));
  }
  const GroundSet x = coverage_ground_set(inst);
  const Matroid m = coverage_matroid(inst);
  s.fit = &*fit;
  s.eval = &*eval;
  s.matroid = &m;
  s.x = &x;
  s.threads = o.common.threads;
  const KfValue kf = curvature_of(*fit, x);
  const std::vector<AlphaRun> runs = run_study(s, kf.k_f);
  const auto dir = output_dir(o.common.out);
  write_study(dir, cfg, s, runs, kf);

  Csv cand(cfg, "candidates-v1",
           {"id", "row", "col", "footprint_cells", "success_prob"});
  for (std::size_t i = 0; i < inst.candidate_count(); ++i) {
    cand.row({fmt(i), std::to_string(inst.candidates[i].row),
              std::to_string(inst.candidates[i].col), fmt(inst.footprint_size(i)),
              fmt(inst.success_prob[static_cast<Eigen::Index>(i)])});
  }
  Csv sel(cfg, "selections-v1", {"alpha", "rank", "id", "row", "col"});
  for (const AlphaRun& r : runs) {
    std::size_t rank = 0;
    for (ElementId e : r.sga.selected) {
      const Cell c = inst.candidates[e.index];
      sel.row({fmt(r.alpha), fmt(rank++), fmt(static_cast<std::size_t>(e.index)),
               std::to_string(c.row), std::to_string(c.col)});
    }
  }
  write_file((dir / "candidates.csv").string(), cand.text());
  write_file((dir / "selections.csv").string(), sel.text());
  write_file((dir / "instance.json").string(), dump(coverage_to_json(inst)));
}

// --------------------------------------------------------------- ota-compare

struct OtaOptions {
  Common common;
  std::string city;
  std::size_t rows = 5;
  std::size_t cols = 5;
  std::uint64_t city_seed = 7;
  std::vector<std::string> scales = {"3/2", "6/4", "12/5"};
  std::size_t seeds = 10;
  std::vector<double> gammas = {0.3, 0.5, 0.7};
  std::optional<double> gamma_trigger;
  std::vector<std::string> modes = {"offline", "ota", "all-step"};
  double alpha = 0.1;
  std::size_t n_s = 200;
  std::size_t grid_points = 50;
  bool logs = false;
  bool keep_idle_picks = false;
};

struct OtaJob {
  std::size_t vehicles = 0;
  std::size_t demands = 0;
  std::uint64_t seed = 0;
  OtaMode mode = OtaMode::kOffline;
  std::optional<double> gamma;
  OtaRun run;
};

std::pair<std::size_t, std::size_t> parse_scale(const std::string& s) {
  const auto slash = s.find('/');
  std::size_t r = 0, n = 0;
  const auto ok = [](const char* b, const char* e, std::size_t& v) {
    const auto res = std::from_chars(b, e, v);
    return res.ec == std::errc() && res.ptr == e;
  };
  if (slash == std::string::npos ||
      !ok(s.data(), s.data() + slash, r) ||
      !ok(s.data() + slash + 1, s.data() + s.size(), n) || n == 0 || r < n) {
    throw ParameterError("scale '" + s + "' must read R/N with R >= N >= 1");
  }
  return {r, n};
}

std::string gamma_cell(const std::optional<double>& g) { return g ? fmt(*g) : "NA"; }

void run_ota_compare(const OtaOptions& o) {
  Config cfg("ota-compare");
  cfg.set("seed", fmt(o.common.seed));
  cfg.set("seeds", o.seeds);
  const StreetNetwork net =
      o.city.empty() ? synth_city(o.rows, o.cols, o.city_seed)
                     : streetnet_from_json(read_json(o.city));
  if (o.city.empty()) {
    cfg.set("city", "synth_city(" + fmt(o.rows) + "," + fmt(o.cols) + "," +
                        fmt(o.city_seed) + ")");
  } else {
    cfg.set("city", o.city);
  }
  std::vector<double> gammas = o.gamma_trigger ? std::vector<double>{*o.gamma_trigger}
                                               : o.gammas;
  for (double g : gammas) {
    if (!(g > 0.0 && g < 1.0)) throw ParameterError("gamma_trigger must lie in (0, 1)");
  }
  std::vector<std::pair<std::size_t, std::size_t>> scales;
  for (const std::string& s : o.scales) scales.push_back(parse_scale(s));
  std::vector<OtaMode> modes;
  for (const std::string& m : o.modes) modes.push_back(parse_ota_mode(m));
  cfg.set("scales", join(o.scales, ","));
  std::vector<std::string> mode_names;
  for (OtaMode m : modes) mode_names.emplace_back(ota_mode_name(m));
  cfg.set("modes", join(mode_names, ","));
  cfg.set("gamma_trigger", join_numbers(gammas));
  cfg.set("alpha", o.alpha);
  cfg.set("n_s", o.n_s);
  cfg.set("grid_points", o.grid_points);
  cfg.set("idle_picks", o.keep_idle_picks ? "keep" : "drop");
  if (o.seeds == 0) throw ParameterError("--seeds must be positive");

  std::vector<OtaJob> jobs;
  for (const auto& [r, n] : scales) {
    for (std::size_t k = 0; k < o.seeds; ++k) {
      for (OtaMode mode : modes) {
        const bool triggered = mode == OtaMode::kStreet || mode == OtaMode::kGeneral;
        const std::vector<std::optional<double>> gs =
            triggered ? std::vector<std::optional<double>>(gammas.begin(), gammas.end())
                      : std::vector<std::optional<double>>{std::nullopt};
        for (const auto& g : gs) {
          OtaJob job;
          job.vehicles = r;
          job.demands = n;
          job.seed = o.common.seed + k;
          job.mode = mode;
          job.gamma = g;
          jobs.push_back(std::move(job));
        }
      }
    }
  }
  fan_out(jobs.size(), o.common.threads, [&](std::size_t i) {
    OtaJob& job = jobs[i];
    const auto [vehicles, demands] = ota_placement(net, job.vehicles, job.demands, job.seed);
    OtaConfig c;
    c.alpha = o.alpha;
    c.gamma_trigger = job.gamma.value_or(0.5);
    c.seed = job.seed;
    c.mode = job.mode;
    c.n_s = o.n_s;
    c.grid_points = o.grid_points;
    c.drop_idle_picks = !o.keep_idle_picks;
    job.run = ota_run(net, vehicles, demands, c);
  });

  std::vector<std::string> cols = {"vehicles", "demands", "seed", "mode",
                                   "gamma", "arrival_time", "assignment_count", "steps"};
  if (o.common.record_timing) cols.push_back("wall_time_s");
  Csv runs(cfg, "ota-runs-v1", cols);
  struct Agg {
    std::size_t runs = 0;
    double arrival = 0.0;
    double count = 0.0;
    double wall = 0.0;
  };
  std::map<std::tuple<std::size_t, std::size_t, int, double>, Agg> agg;
  std::vector<std::tuple<std::size_t, std::size_t, int, double>> order;
  const auto dir = output_dir(o.common.out);
  if (o.logs) std::filesystem::create_directories(dir / "logs");
  for (const OtaJob& job : jobs) {
    std::vector<std::string> row = {
        fmt(job.vehicles), fmt(job.demands), fmt(job.seed),
        std::string(ota_mode_name(job.mode)), gamma_cell(job.gamma),
        fmt(job.run.arrival_time), fmt(job.run.assignment_count),
        fmt(job.run.steps.size())};
    if (o.common.record_timing) row.push_back(fmt(job.run.wall_time_s));
    runs.row(row);
    const auto key = std::make_tuple(job.vehicles, job.demands,
                                     static_cast<int>(job.mode), job.gamma.value_or(-1.0));
    if (!agg.count(key)) order.push_back(key);
    Agg& a = agg[key];
    ++a.runs;
    a.arrival += job.run.arrival_time;
    a.count += static_cast<double>(job.run.assignment_count);
    a.wall += job.run.wall_time_s;
    if (o.logs) {
      std::string name = "ota_R" + fmt(job.vehicles) + "_N" + fmt(job.demands) + "_s" +
                         fmt(job.seed) + "_" + std::string(ota_mode_name(job.mode));
      if (job.gamma) name += "_g" + fmt(*job.gamma);
      write_file((dir / "logs" / (name + ".ndjson")).string(), ota_log_ndjson(job.run));
    }
  }
  cols = {"vehicles", "demands", "mode", "gamma", "runs", "mean_arrival_time",
          "mean_assignment_count"};
  if (o.common.record_timing) cols.push_back("mean_wall_time_s");
  Csv summary(cfg, "ota-summary-v1", cols);
  for (const auto& key : order) {
    const Agg& a = agg[key];
    const double n = static_cast<double>(a.runs);
    const double g = std::get<3>(key);
    std::vector<std::string> row = {
        fmt(std::get<0>(key)), fmt(std::get<1>(key)),
        std::string(ota_mode_name(static_cast<OtaMode>(std::get<2>(key)))),
        g < 0 ? "NA" : fmt(g), fmt(a.runs), fmt(a.arrival / n), fmt(a.count / n)};
    if (o.common.record_timing) row.push_back(fmt(a.wall / n));
    summary.row(row);
  }
  write_file((dir / "ota_runs.csv").string(), runs.text());
  write_file((dir / "ota_summary.csv").string(), summary.text());
}

// ---------------------------------------------------------------------- solve

struct SolveOptions {
  Common common;
  RiskOptions risk;
  std::string instance;
  bool exact = false;
};

void run_solve(const SolveOptions& o) {
  Config cfg("solve");
  cfg.set("seed", fmt(o.common.seed));
  cfg.set("instance", o.instance);
  const Json doc = read_json(o.instance);
  const std::string schema = schema_of(doc);
  std::optional<ModInstance> mod;
  std::optional<CoverageInstance> cov;
  double gamma = 0.0;
  if (schema == kModSchema) {
    mod = mod_from_json(doc);
    gamma = mod_gamma(*mod);
  } else if (schema == kCoverageSchema) {
    cov = coverage_from_json(doc);
    gamma = static_cast<double>(cov->free_cells());
  } else {
    throw InstanceError("solve: unsupported schema '" + schema + "'");
  }
  RiskParams p = base_params(o.risk, gamma, cfg);
  p.alpha = o.risk.alpha.value_or(0.1);
  cfg.set("alpha", p.alpha);
  std::unique_ptr<ScenarioTable> table;
  std::optional<GroundSet> x;
  std::optional<Matroid> m;
  if (mod) {
    if (o.exact) throw ParameterError("--exact applies to coverage instances only");
    const std::size_t n_s = o.risk.resolve_samples(p.gamma_cap, p, cfg, 1000);
    table = std::make_unique<AssignmentTable>(mod_scenario_table(*mod, n_s, o.common.seed));
    x.emplace(mod_ground_set(*mod));
    m.emplace(mod_matroid(*mod));
  } else {
    if (o.exact) {
      if (o.risk.n_s || o.risk.eps) {
        throw ParameterError("--exact does not take --ns, --eps or --delta-conf");
      }
      cfg.set("scenarios", "exact");
      table = std::make_unique<CoverageTable>(CoverageTable::exact(*cov));
    } else {
      const std::size_t n_s = o.risk.resolve_samples(p.gamma_cap, p, cfg, 1000);
      table = std::make_unique<CoverageTable>(CoverageTable::sampled(*cov, n_s, o.common.seed));
    }
    x.emplace(coverage_ground_set(*cov));
    m.emplace(coverage_matroid(*cov));
  }
  SgaOptions so;
  so.threads = o.common.threads;
  const SgaResult r = sga_solve(*table, *m, *x, p, so);
  const KfValue kf = curvature_of(*table, *x);
  Json j = result_to_json(r, *x, p);
  j["instance_schema"] = schema;
  j["n_s"] = table->scenario_count();
  j["eval_count_bound"] = eval_count_bound(*x, p, table->scenario_count());
  j["k_f_source"] = kf.source;
  j["certificate"] = certificate_to_json(certificate(r, kf.k_f, p));
  Json out;
  out["config"] = cfg.json();
  for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = it.value();
  emit(o.common.out, dump(out));
}

// ------------------------------------------------------------- generators

struct GenInstanceOptions {
  Common common;
  std::string family = "mod";
  std::size_t demands = 4;
  std::size_t vehicles = 6;
  int width = 20;
  int height = 20;
  std::size_t candidates = 8;
  std::size_t budget = 4;
  std::string obstacles = "default";
};

void run_gen_instance(const GenInstanceOptions& o) {
  if (o.family == "mod") {
    emit(o.common.out, dump(mod_to_json(mod_generate(o.demands, o.vehicles, o.common.seed))));
  } else if (o.family == "coverage") {
    emit(o.common.out,
         dump(coverage_to_json(coverage_generate(o.width, o.height,
                                                 obstacles_named(o.obstacles),
                                                 o.candidates, o.budget, o.common.seed))));
  } else {
    throw ParameterError("--family must be mod or coverage");
  }
}

struct GenCityOptions {
  Common common;
  std::size_t rows = 5;
  std::size_t cols = 5;
  double diagonal_prob = 0.0;
};

void run_gen_city(const GenCityOptions& o) {
  CityOptions c;
  c.diagonal_prob = o.diagonal_prob;
  emit(o.common.out, dump(streetnet_to_json(synth_city(o.rows, o.cols, o.common.seed, c))));
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ParameterError*>(&e) || dynamic_cast<const IoError*>(&e)) {
    return kExitConfig;
  }
  if (dynamic_cast<const InstanceTooLargeError*>(&e)) return kExitGuard;
  if (dynamic_cast<const InstanceError*>(&e) ||
      dynamic_cast<const InvalidElementError*>(&e) ||
      dynamic_cast<const MatroidViolationError*>(&e) ||
      dynamic_cast<const UnreachableError*>(&e) ||
      dynamic_cast<const EmptyInputError*>(&e)) {
    return kExitInstance;
  }
  return kExitError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CVaR submodular selection experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cvarsel 1.0.0");

  ModOptions mod;
  auto* mod_cmd = app.add_subcommand("mod-offline", "vehicle assignment study over an alpha grid");
  add_common(mod_cmd, mod.common, 1);
  mod.risk.add_to(mod_cmd, true);
  mod_cmd->add_option("--demands", mod.demands, "N")->capture_default_str();
  mod_cmd->add_option("--vehicles", mod.vehicles, "R")->capture_default_str();
  mod_cmd->add_option("--instance", mod.instance, "mod-instance-v1 file");

  CoverageOptions cov;
  auto* cov_cmd = app.add_subcommand("coverage", "sensor coverage study over an alpha grid");
  add_common(cov_cmd, cov.common, 1);
  cov.risk.add_to(cov_cmd, true);
  cov_cmd->add_option("--width", cov.width)->capture_default_str();
  cov_cmd->add_option("--height", cov.height)->capture_default_str();
  cov_cmd->add_option("--candidates", cov.candidates, "N")->capture_default_str();
  cov_cmd->add_option("--budget", cov.budget, "M")->capture_default_str();
  cov_cmd->add_option("--obstacles", cov.obstacles, "default or none")
      ->capture_default_str();
  cov_cmd->add_option("--instance", cov.instance, "coverage-instance-v1 file");
  cov_cmd->add_flag("--exact", cov.exact, "enumerate all failure patterns");

  OtaOptions ota;
  auto* ota_cmd = app.add_subcommand("ota-compare", "online assignment modes on a street network");
  add_common(ota_cmd, ota.common, 1);
  ota_cmd->add_option("--city", ota.city, "streetnet-v1 file");
  ota_cmd->add_option("--rows", ota.rows)->capture_default_str();
  ota_cmd->add_option("--cols", ota.cols)->capture_default_str();
  ota_cmd->add_option("--city-seed", ota.city_seed)->capture_default_str();
  ota_cmd->add_option("--scales", ota.scales, "R/N pairs")->delimiter(',');
  ota_cmd->add_option("--seeds", ota.seeds, "seed count")->capture_default_str();
  ota_cmd->add_option("--gamma-list", ota.gammas, "trigger ratios")->delimiter(',');
  ota_cmd->add_option("--gamma-trigger", ota.gamma_trigger, "single trigger ratio")
      ->excludes("--gamma-list");
  ota_cmd->add_option("--mode", ota.modes,
                      "offline, ota, ota-street, ota-general, all-step")
      ->delimiter(',');
  ota_cmd->add_option("--alpha", ota.alpha)->capture_default_str();
  ota_cmd->add_option("--ns", ota.n_s)->capture_default_str();
  ota_cmd->add_option("--grid-points", ota.grid_points, "Gamma / Delta")->capture_default_str();
  ota_cmd->add_flag("--keep-idle-picks", ota.keep_idle_picks,
                    "assign vehicles whose pick adds nothing at tau_G");
  ota_cmd->add_flag("--logs", ota.logs, "write one NDJSON log per run");
  ota_cmd->add_flag("--record-timing", ota.common.record_timing, "add wall-time columns");

  SolveOptions solve;
  auto* solve_cmd = app.add_subcommand("solve", "run SGA on an instance file");
  add_common(solve_cmd, solve.common, 1);
  solve.risk.add_to(solve_cmd, false);
  solve_cmd->add_option("instance", solve.instance, "instance file")->required();
  solve_cmd->add_flag("--exact", solve.exact, "exact failure patterns (coverage)");

  GenInstanceOptions gen;
  auto* gen_cmd = app.add_subcommand("gen-instance", "write a generated instance");
  add_common(gen_cmd, gen.common, 1);
  gen_cmd->add_option("--family", gen.family, "mod or coverage")->capture_default_str();
  gen_cmd->add_option("--demands", gen.demands)->capture_default_str();
  gen_cmd->add_option("--vehicles", gen.vehicles)->capture_default_str();
  gen_cmd->add_option("--width", gen.width)->capture_default_str();
  gen_cmd->add_option("--height", gen.height)->capture_default_str();
  gen_cmd->add_option("--candidates", gen.candidates)->capture_default_str();
  gen_cmd->add_option("--budget", gen.budget)->capture_default_str();
  gen_cmd->add_option("--obstacles", gen.obstacles, "default or none")
      ->capture_default_str();

  GenCityOptions city;
  auto* city_cmd = app.add_subcommand("gen-city", "write a synthetic street network");
  add_common(city_cmd, city.common, 7);
  city_cmd->add_option("--rows", city.rows)->capture_default_str();
  city_cmd->add_option("--cols", city.cols)->capture_default_str();
  city_cmd->add_option("--diagonal-prob", city.diagonal_prob)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*mod_cmd) run_mod_offline(mod);
    if (*cov_cmd) run_coverage(cov);
    if (*ota_cmd) run_ota_compare(ota);
    if (*solve_cmd) run_solve(solve);
    if (*gen_cmd) run_gen_instance(gen);
    if (*city_cmd) run_gen_city(city);
  } catch (const std::exception& e) {
    std::cerr << "cvarsel: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return 0;
}
