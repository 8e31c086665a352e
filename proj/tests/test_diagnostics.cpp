// Copyright 2026 The portkey-mcmc Authors.
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
#include <stdexcept>
#include <vector>

#include <doctest.h>

#include "portkey/diagnostics.hpp"
#include "portkey/factory.hpp"
#include "test_support.hpp"

using namespace portkey;

namespace {

std::vector<double> iid_normal(std::size_t n, std::uint64_t seed) {
  Rng rng = make_stream(seed);
  std::vector<double> xs(n);
  for (auto& x : xs) x = standard_normal(rng);
  return xs;
}

std::vector<double> ar1(std::size_t n, double rho, std::uint64_t seed) {
  Rng rng = make_stream(seed);
  std::vector<double> xs(n);
  double x = standard_normal(rng) / std::sqrt(1 - rho * rho);
  for (auto& v : xs) {
    v = x;
    x = rho * x + standard_normal(rng);
  }
  return xs;
}

}  // namespace

TEST_CASE("acf of iid noise is small beyond lag zero") {
  const auto xs = iid_normal(100000, 1);
  const auto r = acf(xs, 20);
  CHECK(r[0] == 1.0);
  for (std::size_t k = 1; k <= 20; ++k) CHECK(std::abs(r[k]) < 0.02);
}

TEST_CASE("acf of an alternating series is -1 at lag one") {
  std::vector<double> xs(10000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = i % 2 == 0 ? 1.0 : -1.0;
  const auto r = acf(xs, 2);
  CHECK(r[1] == doctest::Approx(-1.0).epsilon(1e-3));
  CHECK(r[2] == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("acf of AR(1) decays geometrically") {
  const auto xs = ar1(200000, 0.5, 2);
  const auto r = acf(xs, 6);
  for (int k = 1; k <= 6; ++k) CHECK(std::abs(r[static_cast<std::size_t>(k)] - std::pow(0.5, k)) < 0.02);
}

TEST_CASE("acf argument checks") {
  const std::vector<double> constant(50, 3.0);
  CHECK_THROWS_AS(acf(constant, 5), DegenerateSeries);
  const auto xs = iid_normal(10, 3);
  CHECK_THROWS_AS(acf(xs, 10), std::invalid_argument);
  CHECK_THROWS_AS(acf(xs, 0), std::invalid_argument);
}

TEST_CASE("ess of iid draws is close to n") {
  const auto big = iid_normal(1'000'000, 4);
  CHECK(ess(big) == doctest::Approx(1e6).epsilon(0.15));
  std::vector<double> ratios;
  for (std::uint64_t s = 0; s < 40; ++s) ratios.push_back(ess(iid_normal(10000, 100 + s)) / 1e4);
  const double mean = std::accumulate(ratios.begin(), ratios.end(), 0.0) / 40.0;
  CHECK(mean == doctest::Approx(1.0).epsilon(0.15));
  for (double r : ratios) REQUIRE(r <= 1.0);
}

TEST_CASE("ess of AR(1) matches n (1 - rho) / (1 + rho)") {
  const auto xs = ar1(1'000'000, 0.5, 5);
  CHECK(ess(xs) == doctest::Approx(1e6 / 3.0).epsilon(0.15));
  const auto sticky = ar1(1'000'000, 0.95, 6);
  CHECK(ess(sticky) == doctest::Approx(1e6 * 0.05 / 1.95).epsilon(0.2));
}

TEST_CASE("ess is invariant under affine maps") {
  const auto xs = ar1(50000, 0.7, 7);
  std::vector<double> ys(xs.size());
  std::transform(xs.begin(), xs.end(), ys.begin(), [](double x) { return -3.5 * x + 12.0; });
  CHECK(ess(ys) == doctest::Approx(ess(xs)).epsilon(1e-9));
}

TEST_CASE("degenerate and short series") {
  CHECK_THROWS_AS(ess(std::vector<double>(1000, 1.0)), DegenerateSeries);
  CHECK_THROWS_AS(ess(iid_normal(99, 8)), std::invalid_argument);
  // A ramp is as correlated as a moving series gets: ess collapses to ~sqrt(n).
  std::vector<double> ramp(10000);
  std::iota(ramp.begin(), ramp.end(), 0.0);
  CHECK(ess(ramp) < 150.0);
}

TEST_CASE("explicit batch size and mcse") {
  const auto xs = iid_normal(40000, 9);
  CHECK(ess(xs, 400) == doctest::Approx(40000).epsilon(0.3));
  CHECK(mcse(xs) == doctest::Approx(1.0 / 200.0).epsilon(0.2));
  CHECK_THROWS_AS(batch_means_variance(xs, 30000), std::invalid_argument);
  CHECK_THROWS_AS(batch_means_variance(xs, 0), std::invalid_argument);
}

TEST_CASE("loop statistics ignore explicit steps") {
  const std::vector<std::uint64_t> loops{0, 3, 1, 0, 8};
  const auto s = loop_stats(loops);
  CHECK(s.factory_calls == 3);
  CHECK(s.max == 8);
  CHECK(s.mean == doctest::Approx(4.0));
  CHECK(loop_stats(std::vector<std::uint64_t>{0, 0}).mean == 0.0);
}

TEST_CASE("summarize with unit loops") {
  ChainTrace<double> trace;
  const auto xs = iid_normal(1000, 10);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    trace.states.push_back(xs[i]);
    trace.accepted.push_back(i % 4 == 0 ? 1 : 0);
    trace.loops.push_back(1);
  }
  const auto s = summarize<double>(trace, [](const double& x) { return x; }, 2.0);
  CHECK(s.mean_loops == 1.0);
  CHECK(s.max_loops == 1);
  CHECK(s.accept_rate == doctest::Approx(0.25));
  CHECK(s.ess <= 1000.0);
  CHECK(s.ess_per_sec == doctest::Approx(s.ess / 2.0));
  CHECK(s.wall_time_sec == 2.0);

  ChainTrace<double> stuck;
  for (int i = 0; i < 500; ++i) {
    stuck.states.push_back(1.0);
    stuck.accepted.push_back(0);
    stuck.loops.push_back(2);
  }
  CHECK(summarize<double>(stuck, [](const double& x) { return x; }, 1.0).ess == 0.0);

  ChainTrace<double> short_trace;
  short_trace.states = {1.0, 2.0};
  short_trace.accepted = {1, 1};
  short_trace.loops = {1, 1};
  CHECK(std::isnan(summarize<double>(short_trace, [](const double& x) { return x; }, 1.0).ess));
  CHECK_THROWS_AS(summarize<double>(ChainTrace<double>{}, [](const double& x) { return x; }, 1.0),
                  std::invalid_argument);
}

TEST_CASE("portkey mean loops respect 1/(1 - beta)") {
  using portkey::testing::coin;
  for (double beta : {0.99, 0.9, 0.75}) {
    Rng rng = make_stream(11);
    std::vector<std::uint64_t> loops;
    portkey::testing::Tally t;
    for (int i = 0; i < 100000; ++i) {
      const auto o = portkey_two_coin(coin(5, 0.001), coin(0.2, 0.002), PortkeyBeta(beta), rng);
      loops.push_back(o.loops);
      t.add(o);
    }
    const auto s = loop_stats(loops);
    CHECK(s.mean == doctest::Approx(t.loop_mean()));
    CHECK(s.mean <= 1.0 / (1.0 - beta) + 3.0 * t.loop_se());
  }
}
