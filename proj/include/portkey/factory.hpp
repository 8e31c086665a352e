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

#ifndef PORTKEY_FACTORY_HPP
#define PORTKEY_FACTORY_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "portkey/errors.hpp"
#include "portkey/rng.hpp"

/**
 * \file
 * \brief Bernoulli factories for Barker-type acceptance events.
 *
 * A move from x to y is decided without evaluating the target. Each side
 * supplies a WeightedCoin: a bound `c` together with a coin that fires with
 * probability `p`, where `c * p` is the (reciprocal, for the flipped factory)
 * unnormalised target times proposal density at that side.
 *
 * Bounds enter only through the ratio c_y / (c_x + c_y), so both sides may
 * share an arbitrary positive constant. They are stored on the log scale
 * because models such as the correlation prior produce bounds far outside
 * the double range.
 */

namespace portkey {

inline constexpr std::uint64_t kDefaultMaxLoops = 100'000'000;

/// Procedure producing independent Bernoulli(p) events for a possibly unknown p.
class PCoin {
 public:
  using Sampler = std::function<bool(Rng&)>;

  explicit PCoin(Sampler sampler) : sampler_(std::move(sampler)) {}

  /// Validation coin with a known success probability in [0, 1].
  /// Throws ModelContractError outside that range.
  static PCoin with_known_p(double p);

  bool operator()(Rng& rng) const { return sampler_(rng); }

  /// Present only for validation coins.
  std::optional<double> known_p() const noexcept { return known_p_; }

 private:
  Sampler sampler_;
  std::optional<double> known_p_;
};

/// c * p decomposition at one side of a proposed move.
class WeightedCoin {
 public:
  /// Requires a finite c > 0.
  WeightedCoin(double bound, PCoin coin);

  /// Same as above with the bound given as log(c); any finite value is valid.
  static WeightedCoin from_log_bound(double log_bound, PCoin coin);

  double log_bound() const noexcept { return log_bound_; }
  double bound() const;
  const PCoin& coin() const noexcept { return coin_; }

 private:
  WeightedCoin(double log_bound, PCoin coin, int /*tag*/);

  double log_bound_;
  PCoin coin_;
};

/// Portkey gate probability, 0 < beta <= 1.
class PortkeyBeta {
 public:
  /// Throws std::domain_error outside (0, 1].
  explicit PortkeyBeta(double beta);

  static PortkeyBeta one() { return PortkeyBeta(1.0); }

  double value() const noexcept { return value_; }
  bool is_one() const noexcept { return value_ == 1.0; }

 private:
  double value_;
};

/// Decision of one factory run. `loops` counts passes through the outer loop,
/// including a pass that ends at the portkey gate, so it is always >= 1.
struct FactoryOutcome {
  bool accepted = false;
  std::uint64_t loops = 0;

  friend bool operator==(const FactoryOutcome&, const FactoryOutcome&) = default;
};

/// Two-coin factory: fires with probability c_y p_y / (c_x p_x + c_y p_y).
FactoryOutcome two_coin(const WeightedCoin& x, const WeightedCoin& y, Rng& rng,
                        std::uint64_t max_loops = kDefaultMaxLoops);

/// Portkey two-coin factory. Each pass first draws the Bernoulli(beta) gate and
/// rejects when it fails. With beta == 1 the gate is not drawn at all, so the
/// random stream and the result match two_coin exactly.
FactoryOutcome portkey_two_coin(const WeightedCoin& x, const WeightedCoin& y, PortkeyBeta beta,
                                Rng& rng, std::uint64_t max_loops = kDefaultMaxLoops);

/// Flipped portkey factory. `x_tilde` and `y_tilde` decompose the reciprocal
/// of target times proposal; the branch picked with probability
/// c~_x / (c~_x + c~_y) outputs 1 when its coin fires.
FactoryOutcome flipped_portkey_two_coin(const WeightedCoin& x_tilde, const WeightedCoin& y_tilde,
                                        PortkeyBeta beta, Rng& rng,
                                        std::uint64_t max_loops = kDefaultMaxLoops);

// Closed forms, used as oracles by the tests and the validation command.

/// c_y p_y / (c_x p_x + c_y p_y + (1 - beta) / beta * (c_x + c_y)).
double analytic_alpha_portkey(double c_x, double p_x, double c_y, double p_y, double beta);

/// c~_x p~_x / (c~_x p~_x + c~_y p~_y + (1 - beta) / beta * (c~_x + c~_y)).
double analytic_alpha_flipped(double ct_x, double pt_x, double ct_y, double pt_y, double beta);

/// Mean number of loops, 1 / s_beta with
/// s_beta = (1 - beta) + beta * (c_x p_x + c_y p_y) / (c_x + c_y).
double expected_loops(double c_x, double p_x, double c_y, double p_y, double beta);

/// Probability that a single pass terminates (s_beta above).
double termination_probability(double c_x, double p_x, double c_y, double p_y, double beta);

struct OrderingCheck {
  bool lhs_ok = false;  ///< alpha_beta <= beta * alpha_barker
  bool rhs_ok = false;  ///< alpha_barker <= (1 + (1 - beta) / (delta * beta)) * alpha_beta
};

/// Pointwise acceptance orderings between portkey and plain Barker
/// acceptance. rhs_ok is only meaningful when p_x, p_y >= delta.
OrderingCheck ordering_check(double c_x, double p_x, double c_y, double p_y, double beta,
                             double delta);

/// Same orderings for the flipped acceptance, in terms of reciprocal bounds.
OrderingCheck ordering_check_flipped(double ct_x, double pt_x, double ct_y, double pt_y,
                                     double beta, double delta);

}  // namespace portkey

#endif  // PORTKEY_FACTORY_HPP
