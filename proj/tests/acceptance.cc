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


// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <numeric>
#include <string>
#include <vector>

#include "cvarsel/brute_force.h"
#include "cvarsel/coverage.h"
#include "cvarsel/errors.h"
#include "cvarsel/io.h"
#include "cvarsel/mod.h"
#include "cvarsel/ota.h"
#include "cvarsel/risk.h"
#include "cvarsel/sga.h"
#include "cvarsel/streetnet.h"
#include "test_util.h"

namespace cvarsel {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double x, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double k_or_one(const ScenarioTable& t, const GroundSet& x) {
  try {
    return mean_utility_curvature(t, x).value;
  } catch (const ZeroSingletonError&) {
    return 1.0;
  }
}

// ------------------------------------------------------------------ AC-1

struct LemmaTally {
  std::size_t checks = 0;
  std::size_t failures = 0;
  void expect(bool ok) {
    ++checks;
    if (!ok) ++failures;
  }
};

void lemma_checks(const ScenarioTable& table, CounterStream& rng, LemmaTally& t) {
  const std::size_t n = table.element_count();
  std::vector<ElementId> all;
  for (std::size_t i = 0; i < n; ++i) all.emplace_back(i);
  const double gamma = std::max(1.0, 1.2 * table.values(std::span<const ElementId>(all)).maxCoeff());
  const double alphas[] = {0.05, 0.1, 0.3, 0.5, 0.8, 1.0};
  for (int rep = 0; rep < 40; ++rep) {
    const double a = alphas[rng.below(6)];
    const double tol = 1e-12 * gamma / a;
    auto h = [&](const ElementSet& s, double tau) { return auxiliary_h(s, tau, table, a); };

    ElementSet sa, sb;
    std::vector<ElementId> outside;
    for (std::size_t i = 0; i < n; ++i) {
      switch (rng.below(3)) {
        case 0:
          sa.insert(ElementId(i));
          sb.insert(ElementId(i));
          break;
        case 1:
          sb.insert(ElementId(i));
          break;
        default:
          outside.emplace_back(i);
      }
    }
    const double tau = rng.uniform(0.0, gamma);
    if (!outside.empty()) {
      const ElementId e = outside[rng.below(outside.size())];
      const double ha = h(sa, tau), hae = h(sa.with(e), tau);
      const double hb = h(sb, tau), hbe = h(sb.with(e), tau);
      t.expect(hae >= ha - tol);
      t.expect(hbe >= hb - tol);
      t.expect(hb >= ha - tol);
      t.expect(hae - ha >= hbe - hb - tol);
    }
    double t1 = rng.uniform(0.0, gamma), t2 = rng.uniform(0.0, gamma);
    if (t1 > t2) std::swap(t1, t2);
    if (t2 - t1 > 1e-3 * gamma) {
      const double f1 = h(sb, t1), f2 = h(sb, t2), mid = h(sb, 0.5 * (t1 + t2));
      t.expect(mid >= 0.5 * (f1 + f2) - tol);
      const double slope = (f2 - f1) / (t2 - t1);
      const double slack = 2 * tol / (t2 - t1);
      t.expect(slope >= 1.0 - 1.0 / a - slack);
      t.expect(slope <= 1.0 + slack);
    }
    t.expect(std::abs(h(ElementSet{}, tau) - tau * (1.0 - 1.0 / a)) <= tol);
  }
}

Outcome ac1() {
  const auto t0 = std::chrono::steady_clock::now();
  LemmaTally t;
  CounterStream rng(101, StreamDomain::kTestData);
  for (std::uint64_t key = 0; key < 50; ++key) {
    const ModInstance mod = testing::random_small_mod(key);
    lemma_checks(mod_scenario_table(mod, 50, key), rng, t);
    const CoverageInstance cov = testing::random_small_coverage(key);
    lemma_checks(CoverageTable::exact(cov), rng, t);
    lemma_checks(CoverageTable::sampled(cov, 50, key), rng, t);
  }
  const double secs = seconds_since(t0);
  return {t.failures == 0 && secs < 10.0,
          "lemma suite on 50 MoD + 50 coverage instances: " + std::to_string(t.checks) +
              " checks, " + std::to_string(t.failures) + " failures, " + num(secs, 3) + " s"};
}

// ------------------------------------------------------------------ AC-2

Outcome ac2() {
  const double alphas[] = {0.2, 0.4, 0.6, 0.8, 1.0};
  const double var_expected[] = {1, 2, 3, 4, 5};
  const double cvar_expected[] = {1.0, 1.5, 2.0, 2.5, 3.0};
  std::vector<double> v = {1, 2, 3, 4, 5};
  std::size_t mismatches = 0;
  // Every ordering of the sample gives the same estimates.
  do {
    for (int i = 0; i < 5; ++i) {
      if (estimate_var(v, alphas[i]) != var_expected[i]) ++mismatches;
      const CvarEstimate c = estimate_cvar(v, alphas[i]);
      if (c.cvar != cvar_expected[i] || c.var != var_expected[i]) ++mismatches;
    }
  } while (std::next_permutation(v.begin(), v.end()));

  CounterStream rng(102, StreamDomain::kTestData);
  std::vector<double> s(1000);
  for (double& x : s) x = rng.uniform(0.0, 100.0);
  long double sum = 0.0L;
  for (double x : s) sum += x;
  const double mean = static_cast<double>(sum / 1000.0L);
  const double err = std::abs(estimate_cvar(s, 1.0).cvar - mean);
  return {mismatches == 0 && err <= 1e-12,
          "[1..5] family: " + std::to_string(mismatches) +
              " mismatches over 120 orderings; |CVaR_1 - mean| = " + num(err)};
}

// ------------------------------------------------------------------ AC-3

Outcome ac3() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t violations = 0, checks = 0;
  double worst = INFINITY;
  for (std::uint64_t key = 0; key < 20; ++key) {
    const CoverageInstance inst = testing::random_small_coverage(500 + key);
    const CoverageTable table = CoverageTable::exact(inst);
    const GroundSet x = coverage_ground_set(inst);
    const Matroid m = coverage_matroid(inst);
    const double gamma = static_cast<double>(inst.free_cells());
    const double k = k_or_one(table, x);
    // Utilities are integer cell counts, so H(S, .) peaks on an integer tau.
    std::vector<double> grid;
    for (double tau = 0.0; tau <= gamma; tau += 1.0) grid.push_back(tau);
    for (double a : {0.1, 0.5, 1.0}) {
      const double star =
          brute_force_max_h([&](const ElementSet& s, double tau) {
            return auxiliary_h(s, tau, table, a);
          }, m, x, grid).value;
      for (double delta : {1.0, 4.0}) {
        RiskParams p;
        p.alpha = a;
        p.gamma_cap = gamma;
        p.delta_step = delta;
        const SgaResult r = sga_solve(table, m, x, p);
        const double bound =
            (star - delta) / (1.0 + k) - k / (1.0 + k) * gamma * (1.0 / a - 1.0);
        ++checks;
        worst = std::min(worst, r.h_value - bound);
        if (r.h_value < bound - 1e-9) ++violations;
      }
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < 60.0,
          std::to_string(checks) + " exact-mode runs on 20 coverage instances, " +
              std::to_string(violations) + " violations, min slack " + num(worst) + ", " +
              num(secs, 3) + " s"};
}

// ------------------------------------------------------- AC-4, AC-5, AC-9

const std::vector<double> kAlphaGrid = {0.01, 0.1, 0.2, 0.3, 0.4, 0.5,
                                        0.6,  0.7, 0.8, 0.9, 1.0};

struct Sweep {
  std::string name;
  std::vector<SgaResult> results;
  std::vector<double> mean_eval;
  std::vector<double> cvar01_eval;
  std::size_t n_s = 0;
  std::vector<std::uint64_t> bounds;
  double seconds = 0.0;
};

Sweep sweep(const std::string& name, const ScenarioTable& fit, const ScenarioTable& eval,
            const Matroid& m, const GroundSet& x, double gamma) {
  const auto t0 = std::chrono::steady_clock::now();
  Sweep s;
  s.name = name;
  s.n_s = fit.scenario_count();
  for (double a : kAlphaGrid) {
    RiskParams p;
    p.alpha = a;
    p.gamma_cap = gamma;
    p.delta_step = 1.0;
    s.results.push_back(sga_solve(fit, m, x, p));
    const Eigen::VectorXd u = eval.values(s.results.back().selected);
    s.mean_eval.push_back(u.mean());
    s.cvar01_eval.push_back(
        estimate_cvar(std::span<const double>(u.data(), static_cast<std::size_t>(u.size())), 0.1)
            .cvar);
    s.bounds.push_back(eval_count_bound(x, p, s.n_s));
  }
  s.seconds = seconds_since(t0);
  return s;
}

std::vector<Sweep> acceptance_sweeps() {
  std::vector<Sweep> out;
  const std::uint64_t eval_seed = mix64(1 ^ kGolden);
  const ModInstance mod = mod_generate(4, 6, 1);
  out.push_back(sweep("MoD(R=6,N=4)", mod_scenario_table(mod, 1000, 1),
                      mod_scenario_table(mod, 1000, eval_seed), mod_matroid(mod),
                      mod_ground_set(mod), mod_gamma(mod)));
  const CoverageInstance cov =
      coverage_generate(20, 20, default_coverage_obstacles(), 8, 4, 1);
  out.push_back(sweep("coverage(N=8,M=4)", CoverageTable::sampled(cov, 1000, 1),
                      CoverageTable::sampled(cov, 1000, eval_seed), coverage_matroid(cov),
                      coverage_ground_set(cov), static_cast<double>(cov.free_cells())));
  return out;
}

Outcome ac4(const std::vector<Sweep>& sweeps) {
  bool ok = true;
  std::string detail;
  double secs = 0.0;
  for (const Sweep& s : sweeps) {
    double worst = INFINITY;
    for (std::size_t i = 1; i < s.results.size(); ++i) {
      const double prev = s.results[i - 1].h_value, cur = s.results[i].h_value;
      const double rel = (cur - prev) / std::max(std::abs(prev), 1e-12);
      worst = std::min(worst, rel);
      if (cur < prev - 0.02 * std::abs(prev)) ok = false;
    }
    secs += s.seconds;
    detail += s.name + " H " + num(s.results.front().h_value) + " -> " +
              num(s.results.back().h_value) + " (smallest step " + num(100 * worst, 3) + "%); ";
  }
  return {ok && secs < 120.0, detail + num(secs, 3) + " s"};
}

Outcome ac5(const std::vector<Sweep>& sweeps) {
  const std::size_t i01 = 1, i1 = kAlphaGrid.size() - 1;
  bool ok = true;
  std::string detail;
  for (const Sweep& s : sweeps) {
    const double mean_margin = (s.mean_eval[i1] - s.mean_eval[i01]) / std::abs(s.mean_eval[i01]);
    const double cvar_margin =
        (s.cvar01_eval[i01] - s.cvar01_eval[i1]) / std::max(std::abs(s.cvar01_eval[i1]), 1e-12);
    if (mean_margin < -0.01 || cvar_margin < -0.01) ok = false;
    detail += s.name + " mean(a=1)-mean(a=0.1) " + num(100 * mean_margin, 3) +
              "%, CVaR0.1(a=0.1)-CVaR0.1(a=1) " + num(100 * cvar_margin, 3) + "%; ";
  }
  return {ok, detail + "held-out n_s=1000 tables"};
}

// ------------------------------------------------------------------ AC-6

Outcome ac6() {
  const double delta = 0.1, eps = 0.5;
  const std::size_t n = required_samples(10.0, eps, delta);
  bool ok = true;
  std::string detail = "n=" + std::to_string(n) + ";";
  for (double a : {0.1, 0.5, 1.0}) {
    int misses = 0;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
      CounterStream rng(106, StreamDomain::kTestData,
                        {trial, static_cast<std::uint64_t>(a * 1000)});
      std::vector<double> v(n);
      for (double& x : v) x = rng.uniform(0.0, 10.0);
      if (std::abs(estimate_cvar(v, a).cvar - 5.0 * a) > eps) ++misses;
    }
    const double freq = misses / 200.0;
    if (freq > delta + 0.05) ok = false;
    detail += " alpha=" + num(a) + " freq " + num(freq);
  }
  return {ok, detail + " (limit " + num(delta + 0.05) + ")"};
}

// ------------------------------------------------------------------ AC-7

Outcome ac7() {
  const auto t0 = std::chrono::steady_clock::now();
  const StreetNetwork net = streetnet_from_json(
      read_json(std::string(CVARSEL_TEST_DATA) + "/city_5x5_seed7.json"));
  const std::pair<std::size_t, std::size_t> scales[] = {{3, 2}, {6, 4}, {12, 5}};
  const double gammas[] = {0.3, 0.5, 0.7};
  bool ok = true;
  std::string detail;
  for (const auto& [r, n] : scales) {
    double arr_off = 0, arr_ota = 0, cnt_all = 0;
    double cnt[3] = {0, 0, 0};
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const auto [vehicles, demands] = ota_placement(net, r, n, seed);
      OtaConfig c;
      c.seed = seed;
      c.mode = OtaMode::kOffline;
      arr_off += ota_run(net, vehicles, demands, c).arrival_time;
      c.mode = OtaMode::kAllStep;
      cnt_all += static_cast<double>(ota_run(net, vehicles, demands, c).assignment_count);
      c.mode = OtaMode::kStreet;
      for (int g = 0; g < 3; ++g) {
        c.gamma_trigger = gammas[g];
        const OtaRun run = ota_run(net, vehicles, demands, c);
        cnt[g] += static_cast<double>(run.assignment_count);
        if (g == 1) arr_ota += run.arrival_time;
      }
    }
    for (double* v : {&arr_off, &arr_ota, &cnt_all, &cnt[0], &cnt[1], &cnt[2]}) *v /= 10.0;
    const bool arrival_ok = arr_ota <= arr_off * (1 + 1e-12);
    const bool count_ok = cnt[1] <= 0.5 * cnt_all;
    const bool order_ok = cnt[0] <= cnt[1] && cnt[1] <= cnt[2];
    ok = ok && arrival_ok && count_ok && order_ok;
    detail += std::to_string(r) + "/" + std::to_string(n) + ": arrival " + num(arr_ota) +
              " vs " + num(arr_off) + ", count " + num(cnt[1]) + " vs all-step " +
              num(cnt_all) + ", gamma counts " + num(cnt[0]) + "/" + num(cnt[1]) + "/" +
              num(cnt[2]) + "; ";
  }
  const double secs = seconds_since(t0);
  return {ok && secs < 300.0, detail + num(secs, 3) + " s"};
}

// ------------------------------------------------------------------ AC-8

int run_cli(const std::string& args) {
  const std::string cmd = std::string(CVARSEL_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
  bool same = true;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path other = b / fs::relative(entry.path(), a);
    if (!fs::exists(other) ||
        read_file(entry.path().string()) != read_file(other.string())) {
      same = false;
    }
    ++files;
  }
  return same;
}

Outcome ac8() {
  const fs::path work = fs::path(CVARSEL_WORK_DIR) / "acceptance_work";
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string w = work.string();
  if (run_cli("gen-instance --family coverage --seed 3 --out " + w + "/cov.json") != 0) {
    return {false, "gen-instance failed"};
  }
  const std::vector<std::string> commands = {
      "mod-offline",
      "coverage",
      "ota-compare --logs",
      "solve " + w + "/cov.json --alpha 0.1",
      "gen-instance --family mod",
      "gen-city",
  };
  bool ok = true;
  std::size_t files = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const bool single = i >= 3;
    const fs::path a = work / ("run" + std::to_string(i) + "a");
    const fs::path b = work / ("run" + std::to_string(i) + "b");
    fs::create_directories(a);
    fs::create_directories(b);
    const std::string out_a = single ? (a / "out.json").string() : a.string();
    const std::string out_b = single ? (b / "out.json").string() : b.string();
    if (run_cli(commands[i] + " --out " + out_a) != 0 ||
        run_cli(commands[i] + " --out " + out_b) != 0) {
      return {false, "command failed: " + commands[i]};
    }
    ok = same_tree(a, b, files) && ok;
  }
  return {ok, std::to_string(commands.size()) + " commands run twice, " +
                  std::to_string(files) + " files compared byte for byte"};
}

// ------------------------------------------------------------------ AC-9

Outcome ac9(const std::vector<Sweep>& sweeps) {
  bool ok = true;
  std::size_t runs = 0;
  double worst = 0.0;
  for (const Sweep& s : sweeps) {
    for (std::size_t i = 0; i < s.results.size(); ++i) {
      const double used = static_cast<double>(s.results[i].eval_count) *
                          static_cast<double>(s.n_s);
      const double bound = static_cast<double>(s.bounds[i]);
      worst = std::max(worst, used / bound);
      if (used > bound) ok = false;
      ++runs;
    }
  }
  return {ok, std::to_string(runs) + " acceptance runs, max measured/bound " + num(worst)};
}

}  // namespace
}  // namespace cvarsel

int main() {
  using namespace cvarsel;
  int failed = 0;
  auto report = [&](const char* id, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  };
  report("AC-1", ac1);
  report("AC-2", ac2);
  report("AC-3", ac3);
  std::vector<Sweep> sweeps;
  try {
    sweeps = acceptance_sweeps();
  } catch (const std::exception& e) {
    std::printf("acceptance sweeps failed: %s\n", e.what());
  }
  report("AC-4", [&] { return ac4(sweeps); });
  report("AC-5", [&] { return ac5(sweeps); });
  report("AC-6", ac6);
  report("AC-7", ac7);
  report("AC-8", ac8);
  report("AC-9", [&] { return ac9(sweeps); });
  return failed == 0 ? 0 : 1;
}
