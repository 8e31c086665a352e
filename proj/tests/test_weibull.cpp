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
#include <limits>
#include <numeric>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <doctest.h>

#include "portkey/diagnostics.hpp"
#include "portkey/kernel.hpp"
#include "portkey/models/weibull_mixture.hpp"
#include "test_support.hpp"

using namespace portkey;

namespace {

double coin_rate(double theta, const WeibullMixtureParams& params, int n, std::uint64_t seed) {
  Rng rng = make_stream(seed);
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += weibull_p_coin(theta, params, rng) ? 1 : 0;
  return static_cast<double>(hits) / n;
}

}  // namespace

TEST_CASE("weibull envelope values") {
  CHECK(weibull_envelope(10.0 / std::numbers::e, 10.0) == doctest::Approx(1.0));
  CHECK(weibull_envelope(3.0 / std::numbers::e, 3.0) == doctest::Approx(1.0));
  CHECK(weibull_envelope(0.1, 10.0) == doctest::Approx(36.7879441171).epsilon(1e-10));
  CHECK_THROWS_AS(weibull_envelope(0.0, 10.0), std::domain_error);
  CHECK_THROWS_AS(weibull_envelope(-1.0, 10.0), std::domain_error);
}

TEST_CASE("weibull envelope is the maximum over lambda") {
  double best = 0.0;
  for (int i = 1; i <= 2'000'000; ++i) {
    const double lambda = 0.05 + 0.1 * i / 2e6;
    best = std::max(best, weibull_density(0.1, lambda, 10.0));
  }
  CHECK(std::abs(best - weibull_envelope(0.1, 10.0)) / best < 1e-6);

  Rng rng = make_stream(4);
  for (int t = 0; t < 10000; ++t) {
    const double theta = std::exp(8 * uniform01(rng) - 6);
    const double lambda = std::exp(8 * uniform01(rng) - 6);
    const double k = 0.5 + 20 * uniform01(rng);
    REQUIRE(weibull_density(theta, lambda, k) <= weibull_envelope(theta, k) + 1e-12);
  }
}

TEST_CASE("weibull coin frequency matches the quadrature density") {
  const WeibullMixtureParams params;
  const WeibullMixtureTarget target(params);
  for (double theta : {0.05, 0.1, 0.15}) {
    CAPTURE(theta);
    const double p = std::exp(target.exact_log_density(theta)) / weibull_envelope(theta, 10.0);
    const int n = 100000;
    const double rate = coin_rate(theta, params, n, 17);
    CHECK(std::abs(rate - p) < 3.0 * std::sqrt(p * (1 - p) / n));
  }
  CHECK(coin_rate(10.0, params, 10000, 18) == 0.0);
}

TEST_CASE("weibull coin is certain under a point-mass mixing law") {
  WeibullMixtureParams params;
  params.gamma_shape = 1e8;
  params.gamma_rate = 1e9;
  CHECK(coin_rate(0.1, params, 100000, 19) > 0.999);
}

TEST_CASE("quadrature density integrates to one") {
  const WeibullMixtureTarget target{WeibullMixtureParams{}};
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double total = Quad::integrate(
      [&](double t) { return std::exp(target.exact_log_density(t)); }, 0.0, 1.0, 10, 1e-10);
  CHECK(total == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(target.exact_log_density(-0.5) == -std::numeric_limits<double>::infinity());
  CHECK(target.exact_log_density(0.1) < std::log(weibull_envelope(0.1, 10.0)));
}

TEST_CASE("mixture moments") {
  const WeibullMixtureParams params;
  const auto m = mixture_moments(params);
  CHECK(m.mean == doctest::Approx(0.1 * std::tgamma(1.1)).epsilon(1e-14));

  // Generative pair (lambda, theta) drawn with the standard library, not ours.
  std::mt19937_64 gen(2026);
  std::gamma_distribution<double> lambda_dist(10.0, 1.0 / 100.0);
  double s = 0, s2 = 0;
  const int n = 10'000'000;
  for (int i = 0; i < n; ++i) {
    std::weibull_distribution<double> theta_dist(10.0, lambda_dist(gen));
    const double t = theta_dist(gen);
    s += t;
    s2 += t * t;
  }
  const double mean = s / n;
  const double var = s2 / n - mean * mean;
  CHECK(std::abs(mean - m.mean) < 4 * std::sqrt(m.variance / n));
  CHECK(var == doctest::Approx(m.variance).epsilon(0.01));

  WeibullMixtureParams sharp;
  sharp.shape_k = 1e6;
  CHECK(mixture_moments(sharp).mean == doctest::Approx(0.1).epsilon(1e-5));

  // Collapsing the mixing law leaves the Weibull variance at lambda = a / b.
  WeibullMixtureParams point;
  point.gamma_shape = 1e9;
  point.gamma_rate = 1e10;
  const double g1 = std::tgamma(1.1), g2 = std::tgamma(1.2);
  CHECK(mixture_moments(point).variance == doctest::Approx(0.01 * (g2 - g1 * g1)).epsilon(1e-6));
}

TEST_CASE("weibull parameter validation") {
  WeibullMixtureParams bad;
  bad.gamma_rate = 0.0;
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
  CHECK_THROWS_AS(WeibullMixtureTarget{bad}, std::invalid_argument);
  bad = WeibullMixtureParams{};
  bad.proposal_sd = std::nan("");
  CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("weibull chains stay in support and centre on the mixture mean") {
  WeibullMixtureParams params;
  params.proposal_sd = 0.05;  // local moves mix far faster than the default
  const WeibullMixtureTarget target(params);
  const double truth = mixture_moments(params).mean;
  for (double beta : {1.0, 0.9}) {
    CAPTURE(beta);
    const auto trace = run_chain(target, KernelKind::portkey, PortkeyBeta(beta), 200000, 31);
    for (double t : trace.states) REQUIRE(t > 0.0);
    const double mean = std::accumulate(trace.states.begin(), trace.states.end(), 0.0) /
                        static_cast<double>(trace.size());
    CHECK(std::abs(mean - truth) < 4 * mcse(trace.states));
  }
}

TEST_CASE("explicit kernels agree with the factory chain") {
  WeibullMixtureParams params;
  params.proposal_sd = 0.05;
  const WeibullMixtureTarget target(params);
  const double truth = mixture_moments(params).mean;
  const auto trace = run_chain(target, KernelKind::barker_explicit, PortkeyBeta::one(), 20000, 32);
  const double mean = std::accumulate(trace.states.begin(), trace.states.end(), 0.0) /
                      static_cast<double>(trace.size());
  CHECK(std::abs(mean - truth) < 4 * mcse(trace.states));
  for (auto l : trace.loops) REQUIRE(l == 0);
}

TEST_CASE("rng streams and samplers") {
  Rng a = make_stream(5, 0), b = make_stream(5, 0), c = make_stream(5, 1), d = make_stream(6, 0);
  const auto a0 = a();
  CHECK(a0 == b());
  CHECK(a0 != c());
  CHECK(a0 != d());

  Rng rng = make_stream(8);
  const int n = 400000;
  for (double shape : {0.3, 1.0, 10.0}) {
    CAPTURE(shape);
    const double rate = 2.5;
    double s = 0, s2 = 0;
    for (int i = 0; i < n; ++i) {
      const double g = gamma_draw(rng, shape, rate);
      REQUIRE(g > 0.0);
      s += g;
      s2 += g * g;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    const double true_var = shape / (rate * rate);
    CHECK(std::abs(mean - shape / rate) < 4 * std::sqrt(true_var / n));
    CHECK(var == doctest::Approx(true_var).epsilon(0.03));
  }
  double s = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double z = standard_normal(rng);
    s += z;
    s2 += z * z;
  }
  CHECK(std::abs(s / n) < 4 / std::sqrt(n));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
  }
}
