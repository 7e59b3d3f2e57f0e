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
#include <numeric>
#include <vector>

#include "cvarsel/errors.h"
#include "cvarsel/risk.h"
#include "cvarsel/rng.h"
#include "cvarsel/scenario_table.h"
#include "doctest.h"

namespace cvarsel {
namespace {

std::vector<double> random_sample(std::size_t n, std::uint64_t key) {
  CounterStream rng(21, StreamDomain::kTestData, {key});
  std::vector<double> v(n);
  for (double& x : v) x = std::floor(rng.uniform(0.0, 20.0));
  return v;
}

Eigen::VectorXd as_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<Eigen::Index>(v.size()));
}

TEST_CASE("var and cvar on 1..5") {
  const std::vector<double> v = {3, 1, 5, 2, 4};
  CHECK(estimate_var(v, 0.4) == 2.0);
  CHECK(estimate_var(v, 1.0) == 5.0);
  CHECK(estimate_cvar(v, 0.4).cvar == 1.5);
  CHECK(estimate_cvar(v, 0.4).var == 2.0);
  CHECK(estimate_cvar(v, 0.4).tail_count == 2);
  CHECK(estimate_cvar(v, 1.0).cvar == 3.0);
  const std::vector<double> flat = {7, 7, 7};
  CHECK(estimate_var(flat, 0.2) == 7.0);
  for (double a : {0.05, 0.3, 0.7, 1.0}) CHECK(estimate_cvar(flat, a).cvar == 7.0);
}

TEST_CASE("estimators reject bad input") {
  const std::vector<double> empty;
  CHECK_THROWS_AS(estimate_var(empty, 0.5), EmptyInputError);
  CHECK_THROWS_AS(estimate_cvar(empty, 0.5), EmptyInputError);
  const std::vector<double> v = {1};
  CHECK_THROWS_AS(estimate_var(v, 0.0), ParameterError);
  CHECK_THROWS_AS(estimate_cvar(v, 1.5), ParameterError);
}

TEST_CASE("tail count is ceil(alpha n) despite rounding") {
  CHECK(tail_count(10, 0.3) == 3);  // 0.3 * 10 is 3.0000000000000004
  CHECK(tail_count(5, 0.2) == 1);
  CHECK(tail_count(7, 0.01) == 1);
  CHECK(tail_count(100, 0.111) == 12);
}

TEST_CASE("var definition holds on the empirical distribution") {
  for (std::uint64_t key = 0; key < 30; ++key) {
    const std::vector<double> v = random_sample(37, key);
    for (double a : {0.05, 0.1, 0.33, 0.5, 0.9, 1.0}) {
      const double var = estimate_var(v, a);
      const auto below_eq = std::count_if(v.begin(), v.end(),
                                          [&](double x) { return x <= var; });
      CHECK(static_cast<double>(below_eq) >= a * 37 - 1e-9);
      for (double x : v) {
        if (x >= var) continue;
        const auto le = std::count_if(v.begin(), v.end(),
                                      [&](double y) { return y <= x; });
        CHECK(static_cast<double>(le) < a * 37);
      }
    }
  }
}

TEST_CASE("cvar <= var <= max and cvar at alpha 1 is the mean") {
  for (std::uint64_t key = 0; key < 50; ++key) {
    const std::vector<double> v = random_sample(1 + key * 7, key);
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    CHECK(estimate_cvar(v, 1.0).cvar == mean);
    for (double a : {0.01, 0.1, 0.25, 0.5, 0.75, 1.0}) {
      CvarEstimate e = estimate_cvar(v, a);
      CHECK(e.cvar <= e.var);
      CHECK(e.var <= *std::max_element(v.begin(), v.end()));
    }
  }
}

TEST_CASE("cvar is nondecreasing in alpha") {
  for (std::uint64_t key = 0; key < 40; ++key) {
    const std::vector<double> v = random_sample(25 + key, 100 + key);
    double prev = -INFINITY;
    for (int i = 1; i <= 100; ++i) {
      const double c = estimate_cvar(v, i / 100.0).cvar;
      CHECK(c >= prev);
      prev = c;
    }
  }
}

TEST_CASE("auxiliary function examples") {
  Eigen::VectorXd c = Eigen::VectorXd::Constant(6, 4.0);
  CHECK(auxiliary_h(c, 4.0, 0.3) == 4.0);
  Eigen::VectorXd zero = Eigen::VectorXd::Zero(6);
  for (double a : {0.1, 0.5, 1.0}) {
    for (double tau : {0.0, 1.0, 7.5}) {
      CHECK(auxiliary_h(zero, tau, a) == doctest::Approx(tau * (1 - 1 / a)));
    }
  }
  CHECK(auxiliary_h(as_vector({1, 5, 2}), 0.0, 0.2) == 0.0);
}

TEST_CASE("weighted auxiliary function matches duplicated scenarios") {
  Eigen::VectorXd w(2);
  w << 0.25, 0.75;
  const Eigen::VectorXd f = as_vector({2.0, 6.0});
  const Eigen::VectorXd dup = as_vector({2.0, 6.0, 6.0, 6.0});
  for (double tau : {0.0, 1.0, 3.0, 6.0, 9.0}) {
    for (double a : {0.1, 0.5, 1.0}) {
      CHECK(auxiliary_h(f, tau, a, w) == doctest::Approx(auxiliary_h(dup, tau, a)));
    }
  }
}

TEST_CASE("auxiliary function is concave in tau with bounded slopes") {
  for (std::uint64_t key = 0; key < 50; ++key) {
    const std::vector<double> v = random_sample(20, 200 + key);
    for (double a : {0.05, 0.1, 0.5, 1.0}) {
      // Breakpoints are the sample values; add points beyond both ends.
      std::vector<double> pts = v;
      pts.push_back(-3.0);
      pts.push_back(0.0);
      pts.push_back(25.0);
      std::sort(pts.begin(), pts.end());
      pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
      std::vector<double> slope;
      for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const double s = (auxiliary_h(as_vector(v), pts[i + 1], a) -
                          auxiliary_h(as_vector(v), pts[i], a)) /
                         (pts[i + 1] - pts[i]);
        CHECK(s <= 1.0 + 1e-12);
        CHECK(s >= 1.0 - 1.0 / a - 1e-12);
        slope.push_back(s);
      }
      for (std::size_t i = 0; i + 1 < slope.size(); ++i) {
        CHECK(slope[i + 1] <= slope[i] + 1e-12);
      }
      // Second differences on a uniform grid.
      for (double t = 0.0; t < 20.0; t += 0.5) {
        const double d2 = auxiliary_h(as_vector(v), t + 1.0, a) -
                          2.0 * auxiliary_h(as_vector(v), t + 0.5, a) +
                          auxiliary_h(as_vector(v), t, a);
        CHECK(d2 <= 1e-12);
      }
    }
  }
}

TEST_CASE("grid maximum of the auxiliary function approaches cvar") {
  for (std::uint64_t key = 0; key < 20; ++key) {
    CounterStream rng(22, StreamDomain::kTestData, {key});
    std::vector<double> v(100);
    for (double& x : v) x = rng.uniform(0.0, 10.0);
    for (double a : {0.1, 0.5, 1.0}) {
      const double cvar = estimate_cvar(v, a).cvar;
      for (double step : {1.0, 0.1, 0.01}) {
        double best = -INFINITY;
        for (double t = 0.0; t <= 10.0 + 1e-9; t += step) {
          best = std::max(best, auxiliary_h(as_vector(v), t, a));
        }
        CHECK(best <= cvar + 1e-9);
        CHECK(best >= cvar - std::max(1.0, 1.0 / a - 1.0) * step - 1e-9);
      }
    }
  }
}

TEST_CASE("required sample counts") {
  CHECK(required_samples(10, 1, 0.05) == 185);
  CHECK(required_samples(1, 1, 2.0 / std::exp(2.0)) == 1);
  CHECK(required_samples(10, 0.5, 0.1) == 600);
  for (double g : {1.0, 3.0, 10.0}) {
    const auto base = required_samples(g, 0.3, 0.05);
    const auto doubled = required_samples(2 * g, 0.3, 0.05);
    CHECK(doubled <= 4 * base);
    CHECK(doubled + 3 >= 4 * base);
  }
  CHECK_THROWS_AS(required_samples(0, 1, 0.1), ParameterError);
  CHECK_THROWS_AS(required_samples(1, -1, 0.1), ParameterError);
  CHECK_THROWS_AS(required_samples(1, 1, 1.5), ParameterError);
}

TEST_CASE("dkw sample size bounds the cvar error of a uniform distribution") {
  const std::size_t n = required_samples(10, 0.5, 0.1);
  for (double a : {0.1, 0.5, 1.0}) {
    const double exact = 5.0 * a;  // CVaR of U[0, 10]
    int misses = 0;
    for (std::uint64_t trial = 0; trial < 200; ++trial) {
      CounterStream rng(23, StreamDomain::kTestData,
                        {trial, static_cast<std::uint64_t>(a * 100)});
      std::vector<double> v(n);
      for (double& x : v) x = rng.uniform(0.0, 10.0);
      if (std::abs(estimate_cvar(v, a).cvar - exact) > 0.5) ++misses;
    }
    CHECK(misses / 200.0 <= 0.1 + 0.05);
  }
}

TEST_CASE("risk parameters are validated") {
  RiskParams p;
  CHECK_NOTHROW(p.validate());
  p.alpha = 0.0;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = RiskParams{0.5, 10, 20};
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p = RiskParams{0.5, 10, 1};
  p.epsilon = 0.1;
  CHECK_THROWS_AS(p.validate(), ParameterError);
  p.delta_conf = 0.05;
  CHECK_NOTHROW(p.validate());
}

TEST_CASE("weights are validated") {
  Eigen::VectorXd w(2);
  w << 0.5, 0.4;
  CHECK_THROWS_AS(validate_weights(w, 2), ParameterError);
  w << 0.5, 0.5;
  CHECK_THROWS_AS(validate_weights(w, 3), ParameterError);
  CHECK_NOTHROW(validate_weights(w, 2));
}

TEST_CASE("counter streams are reproducible and order independent") {
  CounterStream a(5, StreamDomain::kTestData, {1, 2});
  CounterStream b(5, StreamDomain::kTestData, {1, 2});
  CounterStream c(5, StreamDomain::kTestData, {2, 1});
  const auto a1 = a(), a2 = a();
  CHECK(a1 == b());
  CHECK(a2 == b());
  CHECK(a1 != c());
  CounterStream u(6, StreamDomain::kTestData);
  double sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double x = u.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    sum += x;
  }
  CHECK(sum / 10000 == doctest::Approx(0.5).epsilon(0.02));
}

}  // namespace
}  // namespace cvarsel
