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

#include "portkey/models/discrete_target.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "portkey/errors.hpp"

namespace portkey {

DiscreteTarget::DiscreteTarget(Eigen::VectorXd pi, Eigen::MatrixXd q, Eigen::MatrixXd bounds,
                               bool flipped, int initial)
    : pi_(std::move(pi)), q_(std::move(q)), bounds_(std::move(bounds)), flipped_(flipped),
      initial_(initial) {
  const auto n = pi_.size();
  if (q_.rows() != n || q_.cols() != n || bounds_.rows() != n || bounds_.cols() != n) {
    throw std::invalid_argument("dimension mismatch");
  }
  if (initial_ < 0 || initial_ >= n) throw std::invalid_argument("initial state out of range");
}

DiscreteTarget DiscreteTarget::with_slack(Eigen::VectorXd pi, Eigen::MatrixXd q, double slack,
                                          bool flipped, int initial) {
  if (!(slack >= 1.0)) throw std::invalid_argument("slack must be >= 1");
  const auto n = pi.size();
  Eigen::MatrixXd bounds(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      const double mass = pi(x) * q(x, y);
      bounds(x, y) = mass > 0.0 ? slack * (flipped ? 1.0 / mass : mass) : 1.0;
    }
  }
  return DiscreteTarget(std::move(pi), std::move(q), std::move(bounds), flipped, initial);
}

DiscreteTarget::State DiscreteTarget::propose(State x, Rng& rng) const {
  double u = uniform01(rng);
  const auto n = static_cast<int>(pi_.size());
  for (int y = 0; y < n; ++y) {
    u -= q_(x, y);
    if (u < 0.0) return y;
  }
  return n - 1;
}

WeightedCoin DiscreteTarget::weighted_coin_at(State from, State to) const {
  const double mass = pi_(from) * q_(from, to);
  const double bound = bounds_(from, to);
  const double p = flipped_ ? 1.0 / (mass * bound) : mass / bound;
  if (!(p <= 1.0 + 1e-12)) {
    throw ModelContractError("bound violated at state " + std::to_string(from) + " -> " +
                             std::to_string(to));
  }
  return WeightedCoin(bound, PCoin::with_known_p(std::min(p, 1.0)));
}

}  // namespace portkey
