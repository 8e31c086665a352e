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


#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "portkey/factory.hpp"
#include "test_support.hpp"

using namespace portkey;
using portkey::testing::binomial_z;
using portkey::testing::coin;
using portkey::testing::Tally;

namespace {

template <class F>
Tally simulate(F&& factory, std::uint64_t n, std::uint64_t seed) {
  Rng rng = make_stream(seed);
  Tally t;
  for (std::uint64_t i = 0; i < n; ++i) t.add(factory(rng));
  return t;
}

}  // namespace

TEST_CASE("analytic acceptance: hand-evaluated values") {
  CHECK(analytic_alpha_portkey(1, 0.5, 1, 0.5, 1) == doctest::Approx(0.5));
  CHECK(analytic_alpha_portkey(1, 1, 1, 1, 0.5) == doctest::Approx(0.25));
  CHECK(analytic_alpha_portkey(2, 0.5, 1, 0.25, 1) == doctest::Approx(0.2));
  CHECK(analytic_alpha_portkey(2, 0.5, 1, 0.25, 0.9) ==
        doctest::Approx(0.25 / (1.25 + 3.0 / 9.0)).epsilon(1e-14));
  CHECK(analytic_alpha_flipped(1, 1, 1, 1, 1) == doctest::Approx(0.5));
  CHECK(analytic_alpha_flipped(4, 0.5, 2, 0.5, 0.8) == doctest::Approx(4.0 / 9.0).epsilon(1e-14));
  CHECK(analytic_alpha_flipped(1, 1, 1, 0, 1) == 1.0);
}

TEST_CASE("analytic acceptance rejects beta outside (0, 1]") {
  CHECK_THROWS_AS(analytic_alpha_portkey(1, 1, 1, 1, 0.0), std::domain_error);
  CHECK_THROWS_AS(analytic_alpha_portkey(1, 1, 1, 1, 1.5), std::domain_error);
  CHECK_THROWS_AS(analytic_alpha_flipped(1, 1, 1, 1, -0.1), std::domain_error);
  CHECK_THROWS_AS(PortkeyBeta(0.0), std::domain_error);
  CHECK_THROWS_AS(PortkeyBeta(std::nan("")), std::domain_error);
  CHECK(PortkeyBeta::one().is_one());
}

TEST_CASE("coin construction contracts") {
  CHECK_THROWS_AS(PCoin::with_known_p(1.2), ModelContractError);
  CHECK_THROWS_AS(PCoin::with_known_p(-0.01), ModelContractError);
  CHECK(PCoin::with_known_p(0.3).known_p() == 0.3);
  CHECK_FALSE(PCoin([](Rng&) { return true; }).known_p().has_value());
  CHECK_THROWS_AS(WeightedCoin(0.0, PCoin::with_known_p(0.5)), std::invalid_argument);
  CHECK_THROWS_AS(WeightedCoin(INFINITY, PCoin::with_known_p(0.5)), std::invalid_argument);
  const auto far = WeightedCoin::from_log_bound(5000.0, PCoin::with_known_p(0.5));
  CHECK(far.log_bound() == 5000.0);
}

TEST_CASE("expected loops and termination probability") {
  CHECK(expected_loops(1, 1, 1, 1, 0.3) == doctest::Approx(1.0));
  CHECK(expected_loops(2, 0.5, 1, 0.25, 1) == doctest::Approx(2.4));
  CHECK(termination_probability(2, 0.5, 1, 0.25, 0.5) ==
        doctest::Approx(0.5 + 0.5 * 1.25 / 3.0));
  CHECK_THROWS_AS(expected_loops(1, 0, 1, 0, 1), std::domain_error);
  for (double beta : {0.99, 0.9, 0.5, 0.1}) {
    CHECK(expected_loops(1, 0, 1, 0, beta) == doctest::Approx(1.0 / (1.0 - beta)));
    CHECK(expected_loops(3, 0.01, 0.2, 0.02, beta) <= 1.0 / (1.0 - beta));
  }
}

TEST_CASE("two-coin trivial cases") {
  Rng rng = make_stream(7);
  for (int i = 0; i < 1000; ++i) {
    const auto both = two_coin(coin(1, 1), coin(1, 1), rng);
    CHECK(both.loops == 1);
    CHECK(two_coin(coin(1, 0), coin(1, 1), rng).accepted);
  }
}

TEST_CASE("two-coin Monte Carlo matches closed form") {
  const auto t = simulate([](Rng& r) { return two_coin(coin(2, 0.5), coin(1, 0.25), r); },
                          1'000'000, 11);
  CHECK(binomial_z(t, 0.2) < 4.0);
  CHECK(std::abs(t.loop_mean() - 2.4) < 4.0 * t.loop_se());
}

TEST_CASE("portkey Monte Carlo matches closed form") {
  const auto sym = simulate(
      [](Rng& r) { return portkey_two_coin(coin(1, 1), coin(1, 1), PortkeyBeta(0.5), r); },
      1'000'000, 12);
  CHECK(binomial_z(sym, 0.25) < 4.0);
  const auto t = simulate(
      [](Rng& r) { return portkey_two_coin(coin(2, 0.5), coin(1, 0.25), PortkeyBeta(0.9), r); },
      1'000'000, 13);
  CHECK(binomial_z(t, 0.25 / (1.25 + 3.0 / 9.0)) < 4.0);
  CHECK(std::abs(t.loop_mean() - expected_loops(2, 0.5, 1, 0.25, 0.9)) < 4.0 * t.loop_se());
}

TEST_CASE("flipped Monte Carlo matches closed form") {
  const auto t = simulate(
      [](Rng& r) {
        return flipped_portkey_two_coin(coin(4, 0.5), coin(2, 0.5), PortkeyBeta(0.8), r);
      },
      1'000'000, 14);
  CHECK(binomial_z(t, 4.0 / 9.0) < 4.0);
  const auto half = simulate(
      [](Rng& r) { return flipped_portkey_two_coin(coin(1, 1), coin(1, 1), PortkeyBeta::one(), r); },
      200'000, 15);
  CHECK(binomial_z(half, 0.5) < 4.0);
}

TEST_CASE("flipped factory at beta one recovers barker") {
  // pi(x) q = 0.3, pi(y) q = 0.05: reciprocal bounds with p = 1.
  const double fx = 0.3, fy = 0.05;
  const double barker = fy / (fx + fy);
  CHECK(analytic_alpha_flipped(1 / fx, 1, 1 / fy, 1, 1) == doctest::Approx(barker));
  const auto t = simulate(
      [&](Rng& r) {
        return flipped_portkey_two_coin(coin(1 / fx, 1), coin(1 / fy, 1), PortkeyBeta::one(), r);
      },
      400'000, 16);
  CHECK(binomial_z(t, barker) < 4.0);
}

TEST_CASE("bounds enter only through their ratio") {
  for (double scale : {1e-200, 1.0, 1e250}) {
    Rng a = make_stream(3);
    Rng b = make_stream(3);
    for (int i = 0; i < 2000; ++i) {
      const auto base = portkey_two_coin(coin(2, 0.5), coin(1, 0.25), PortkeyBeta(0.7), a);
      const auto scaled = portkey_two_coin(
          WeightedCoin::from_log_bound(std::log(2.0) + std::log(scale), PCoin::with_known_p(0.5)),
          WeightedCoin::from_log_bound(std::log(scale), PCoin::with_known_p(0.25)),
          PortkeyBeta(0.7), b);
      REQUIRE(base == scaled);
    }
  }
}

TEST_CASE("portkey at beta one is bit-identical to two-coin") {
  Rng a = make_stream(99, 4);
  Rng b = make_stream(99, 4);
  for (int i = 0; i < 100000; ++i) {
    const double cx = 0.5 + i % 7, px = (i % 11) / 10.0, cy = 1.0 + i % 3, py = 0.05 + (i % 5) / 5.0;
    REQUIRE(portkey_two_coin(coin(cx, px), coin(cy, py), PortkeyBeta::one(), a) ==
            two_coin(coin(cx, px), coin(cy, py), b));
  }
  CHECK(a() == b());
}

TEST_CASE("loop budget") {
  Rng rng = make_stream(1);
  CHECK_THROWS_AS(two_coin(coin(1, 0), coin(1, 0), rng, 1000), LoopBudgetExceeded);
  try {
    two_coin(coin(1, 0), coin(1, 0), rng, 17);
  } catch (const LoopBudgetExceeded& e) {
    CHECK(e.budget() == 17);
  }
  // The gate terminates almost surely well within budget.
  CHECK_NOTHROW(portkey_two_coin(coin(1, 0), coin(1, 0), PortkeyBeta(0.5), rng, 1000));
  const auto o = portkey_two_coin(coin(1, 1), coin(1, 1), PortkeyBeta(0.5), rng, 1);
  CHECK(o.loops == 1);
}

TEST_CASE("gate rejection counts as one loop") {
  Rng rng = make_stream(5);
  // With p = 0 on both sides only the gate can stop the factory.
  Tally t;
  for (int i = 0; i < 200000; ++i) {
    const auto o = portkey_two_coin(coin(1, 0), coin(1, 0), PortkeyBeta(0.75), rng);
    REQUIRE(o.loops >= 1);
    REQUIRE_FALSE(o.accepted);
    t.add(o);
  }
  CHECK(std::abs(t.loop_mean() - 4.0) < 4.0 * t.loop_se());
}

TEST_CASE("portkey acceptance is nondecreasing in beta") {
  Rng rng = make_stream(21);
  for (int t = 0; t < 5000; ++t) {
    const double cx = 0.01 + 10 * uniform01(rng), cy = 0.01 + 10 * uniform01(rng);
    const double px = uniform01(rng), py = uniform01(rng);
    double prev = 0.0;
    for (double beta = 0.01; beta <= 1.0; beta += 0.01) {
      const double a = analytic_alpha_portkey(cx, px, cy, py, std::min(beta, 1.0));
      REQUIRE(a >= prev - 1e-15);
      prev = a;
    }
  }
}

TEST_CASE("ordering check examples") {
  const auto eq = ordering_check(1, 0.5, 1, 0.5, 1, 0.5);
  CHECK(eq.lhs_ok);
  CHECK(eq.rhs_ok);
  // alpha_B = 0.5, alpha_beta = 0.25: both sides hold with equality.
  const auto tight = ordering_check(1, 1, 1, 1, 0.5, 1);
  CHECK(tight.lhs_ok);
  CHECK(tight.rhs_ok);
}

TEST_CASE("ordering check holds on random tuples") {
  Rng rng = make_stream(22);
  for (int t = 0; t < 10000; ++t) {
    const double delta = 0.01 + 0.98 * uniform01(rng);
    const double cx = std::exp(6 * uniform01(rng) - 3), cy = std::exp(6 * uniform01(rng) - 3);
    const double px = delta + (1 - delta) * uniform01(rng);
    const double py = delta + (1 - delta) * uniform01(rng);
    const double beta = 1.0 - 0.999 * uniform01(rng);
    const auto plain = ordering_check(cx, px, cy, py, beta, delta);
    const auto flipped = ordering_check_flipped(cx, px, cy, py, beta, delta);
    REQUIRE(plain.lhs_ok);
    REQUIRE(plain.rhs_ok);
    REQUIRE(flipped.lhs_ok);
    REQUIRE(flipped.rhs_ok);
  }
}

TEST_CASE("ordering check detects a violated bound") {
  // delta larger than the actual coin probabilities makes the upper bound false.
  const auto bad = ordering_check(1, 0.01, 1, 0.01, 0.5, 0.9);
  CHECK(bad.lhs_ok);
  CHECK_FALSE(bad.rhs_ok);
}
