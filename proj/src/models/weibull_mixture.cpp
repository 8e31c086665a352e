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

#include "portkey/models/weibull_mixture.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace portkey {

void WeibullMixtureParams::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("weibull.") + name + " must be positive");
    }
  };
  positive(shape_k, "k");
  positive(gamma_shape, "gamma_shape");
  positive(gamma_rate, "gamma_rate");
  positive(proposal_sd, "proposal_sd");
  positive(initial_theta, "initial_theta");
}

double weibull_density(double theta, double lambda, double k) {
  if (theta <= 0.0) return 0.0;
  const double u = std::pow(theta / lambda, k);
  return k / theta * u * std::exp(-u);
}

double weibull_envelope(double theta, double k) {
  if (!(theta > 0.0)) throw std::domain_error("weibull_envelope requires theta > 0");
  return k / (std::numbers::e * theta);
}

bool weibull_p_coin(double theta, const WeibullMixtureParams& params, Rng& rng) {
  const double lambda = gamma_draw(rng, params.gamma_shape, params.gamma_rate);
  const double log_u = params.shape_k * (std::log(theta) - std::log(lambda));
  // pi(theta | lambda) / envelope = e u exp(-u) = exp(1 + log u - u)
  const double ratio = std::exp(1.0 + log_u - std::exp(log_u));
  return uniform01(rng) < ratio;
}

Moments mixture_moments(const WeibullMixtureParams& params) {
  const double a = params.gamma_shape;
  const double b = params.gamma_rate;
  const double k = params.shape_k;
  const double m1 = a / b;
  const double m2 = a * (a + 1.0) / (b * b);
  const double g1 = std::tgamma(1.0 + 1.0 / k);
  const double g2 = std::tgamma(1.0 + 2.0 / k);
  return {g1 * m1, m2 * g2 - (m1 * g1) * (m1 * g1)};
}

WeibullMixtureTarget::WeibullMixtureTarget(WeibullMixtureParams params) : params_(params) {
  params_.validate();
}

WeightedCoin WeibullMixtureTarget::weighted_coin_at(State from, State /*to*/) const {
  const WeibullMixtureParams p = params_;
  return WeightedCoin(weibull_envelope(from, p.shape_k),
                      PCoin([from, p](Rng& rng) { return weibull_p_coin(from, p, rng); }));
}

double WeibullMixtureTarget::exact_log_density(State theta) const {
  if (theta <= 0.0) return -std::numeric_limits<double>::infinity();
  const double a = params_.gamma_shape;
  const double b = params_.gamma_rate;
  const double k = params_.shape_k;
  const double log_norm = a * std::log(b) - std::lgamma(a);
  auto integrand = [&](double lambda) {
    if (lambda <= 0.0) return 0.0;
    const double log_gamma = log_norm + (a - 1.0) * std::log(lambda) - b * lambda;
    return weibull_density(theta, lambda, k) * std::exp(log_gamma);
  };
  // Split at theta, where the Weibull factor peaks as a function of lambda.
  using Quad = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double left = Quad::integrate(integrand, 0.0, theta, 15, 1e-12);
  const double right =
      Quad::integrate(integrand, theta, std::numeric_limits<double>::infinity(), 15, 1e-12);
  return std::log(left + right);
}

}  // namespace portkey
