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

#include "portkey/factory.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace portkey {

namespace {

void require_beta(double beta) {
  if (!(beta > 0.0 && beta <= 1.0)) {
    throw std::domain_error("portkey beta must lie in (0, 1], got " + std::to_string(beta));
  }
}

// Shared loop of all three factories. The branch chosen with probability
// c_fire / (c_fire + c_stop) outputs 1 when its coin succeeds; the other
// branch outputs 0 when its coin succeeds.
FactoryOutcome run_factory(const WeightedCoin& fire, const WeightedCoin& stop, double beta,
                           Rng& rng, std::uint64_t max_loops) {
  const bool gated = beta != 1.0;
  const double fire_branch = 1.0 / (1.0 + std::exp(stop.log_bound() - fire.log_bound()));
  for (std::uint64_t loops = 1;; ++loops) {
    if (loops > max_loops) throw LoopBudgetExceeded(max_loops);
    if (gated && !bernoulli(rng, beta)) return {false, loops};
    if (bernoulli(rng, fire_branch)) {
      if (fire.coin()(rng)) return {true, loops};
    } else if (stop.coin()(rng)) {
      return {false, loops};
    }
  }
}

}  // namespace

PCoin PCoin::with_known_p(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ModelContractError("coin probability " + std::to_string(p) + " outside [0, 1]");
  }
  PCoin coin([p](Rng& rng) { return bernoulli(rng, p); });
  coin.known_p_ = p;
  return coin;
}

WeightedCoin::WeightedCoin(double bound, PCoin coin)
    : WeightedCoin(std::log(bound), std::move(coin), 0) {
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw std::invalid_argument("weighted coin bound must be finite and positive");
  }
}

WeightedCoin::WeightedCoin(double log_bound, PCoin coin, int)
    : log_bound_(log_bound), coin_(std::move(coin)) {}

WeightedCoin WeightedCoin::from_log_bound(double log_bound, PCoin coin) {
  if (!std::isfinite(log_bound)) {
    throw std::invalid_argument("weighted coin log bound must be finite");
  }
  return WeightedCoin(log_bound, std::move(coin), 0);
}

double WeightedCoin::bound() const { return std::exp(log_bound_); }

PortkeyBeta::PortkeyBeta(double beta) : value_(beta) { require_beta(beta); }

FactoryOutcome two_coin(const WeightedCoin& x, const WeightedCoin& y, Rng& rng,
                        std::uint64_t max_loops) {
  return run_factory(y, x, 1.0, rng, max_loops);
}

FactoryOutcome portkey_two_coin(const WeightedCoin& x, const WeightedCoin& y, PortkeyBeta beta,
                                Rng& rng, std::uint64_t max_loops) {
  return run_factory(y, x, beta.value(), rng, max_loops);
}

FactoryOutcome flipped_portkey_two_coin(const WeightedCoin& x_tilde, const WeightedCoin& y_tilde,
                                        PortkeyBeta beta, Rng& rng, std::uint64_t max_loops) {
  return run_factory(x_tilde, y_tilde, beta.value(), rng, max_loops);
}

double analytic_alpha_portkey(double c_x, double p_x, double c_y, double p_y, double beta) {
  require_beta(beta);
  const double slack = (1.0 - beta) / beta * (c_x + c_y);
  return c_y * p_y / (c_x * p_x + c_y * p_y + slack);
}

double analytic_alpha_flipped(double ct_x, double pt_x, double ct_y, double pt_y, double beta) {
  require_beta(beta);
  const double slack = (1.0 - beta) / beta * (ct_x + ct_y);
  return ct_x * pt_x / (ct_x * pt_x + ct_y * pt_y + slack);
}

double termination_probability(double c_x, double p_x, double c_y, double p_y, double beta) {
  require_beta(beta);
  return (1.0 - beta) + beta * (c_y * p_y + c_x * p_x) / (c_x + c_y);
}

double expected_loops(double c_x, double p_x, double c_y, double p_y, double beta) {
  const double s = termination_probability(c_x, p_x, c_y, p_y, beta);
  if (!(s > 0.0)) {
    throw std::domain_error("factory never terminates: c_x p_x + c_y p_y = 0 with beta = 1");
  }
  return 1.0 / s;
}

namespace {

bool leq(double a, double b) {
  return a <= b + 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

OrderingCheck ordering_check(double c_x, double p_x, double c_y, double p_y, double beta,
                             double delta) {
  const double alpha_b = analytic_alpha_portkey(c_x, p_x, c_y, p_y, 1.0);
  const double alpha_beta = analytic_alpha_portkey(c_x, p_x, c_y, p_y, beta);
  const double factor = 1.0 + (1.0 - beta) / (delta * beta);
  return {leq(alpha_beta, beta * alpha_b), leq(alpha_b, factor * alpha_beta)};
}

OrderingCheck ordering_check_flipped(double ct_x, double pt_x, double ct_y, double pt_y,
                                     double beta, double delta) {
  // The flipped acceptance has the portkey form with the two sides exchanged.
  return ordering_check(ct_y, pt_y, ct_x, pt_x, beta, delta);
}

}  // namespace portkey
