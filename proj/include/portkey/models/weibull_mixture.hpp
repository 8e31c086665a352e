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

#ifndef PORTKEY_MODELS_WEIBULL_MIXTURE_HPP
#define PORTKEY_MODELS_WEIBULL_MIXTURE_HPP

#include "portkey/factory.hpp"
#include "portkey/rng.hpp"

namespace portkey {

/// Gamma(shape, rate) mixture over the scale of a Weibull with known shape:
/// pi(theta) = integral of Weibull(theta | scale lambda, shape k) Gamma(d lambda).
struct WeibullMixtureParams {
  double shape_k = 10.0;
  double gamma_shape = 10.0;
  double gamma_rate = 100.0;  // rate, so E[lambda] = gamma_shape / gamma_rate
  double proposal_sd = 2.0;   // random walk N(theta, 4)
  double initial_theta = 0.1;

  /// Throws std::invalid_argument naming the first bad field.
  void validate() const;

  friend bool operator==(const WeibullMixtureParams&, const WeibullMixtureParams&) = default;
};

/// Weibull(scale lambda, shape k) density at theta.
double weibull_density(double theta, double lambda, double k);

/// k / (e theta): the maximum over lambda of the Weibull density at theta.
double weibull_envelope(double theta, double k);

/// One coin with success probability pi(theta) / envelope(theta): draws
/// lambda from the mixing Gamma and accepts iff U <= e u exp(-u),
/// u = (theta / lambda)^k.
bool weibull_p_coin(double theta, const WeibullMixtureParams& params, Rng& rng);

struct Moments {
  double mean = 0.0;
  double variance = 0.0;
};

/// Mean and variance of theta under the mixture.
Moments mixture_moments(const WeibullMixtureParams& params);

/// Target for the two-coin and portkey kernels. The state is theta > 0.
class WeibullMixtureTarget {
 public:
  using State = double;

  explicit WeibullMixtureTarget(WeibullMixtureParams params);

  const WeibullMixtureParams& params() const noexcept { return params_; }

  State initial_state() const { return params_.initial_theta; }
  State propose(State theta, Rng& rng) const {
    return theta + params_.proposal_sd * standard_normal(rng);
  }
  bool in_support(State theta) const { return theta > 0.0; }
  bool flipped() const { return false; }

  /// The proposal is symmetric, so only pi(from) is decomposed.
  WeightedCoin weighted_coin_at(State from, State to) const;

  /// log pi(theta) by adaptive quadrature over lambda. Slow; used for the
  /// explicit validation kernels.
  double exact_log_density(State theta) const;

 private:
  WeibullMixtureParams params_;
};

}  // namespace portkey

#endif  // PORTKEY_MODELS_WEIBULL_MIXTURE_HPP
