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

#ifndef PORTKEY_MODELS_DISCRETE_TARGET_HPP
#define PORTKEY_MODELS_DISCRETE_TARGET_HPP

#include <Eigen/Dense>

#include "portkey/factory.hpp"
#include "portkey/rng.hpp"

namespace portkey {

/// Finite-state validation target with known pi and proposal matrix q.
///
/// `bounds(x, y)` is the weighted-coin bound at x for a move to y: an upper
/// bound on pi(x) q(x, y), or on 1 / (pi(x) q(x, y)) for a flipped target.
/// Coins carry their exact p so contract violations are caught.
class DiscreteTarget {
 public:
  using State = int;

  DiscreteTarget(Eigen::VectorXd pi, Eigen::MatrixXd q, Eigen::MatrixXd bounds, bool flipped,
                 int initial = 0);

  /// Bounds equal to `slack` times the tightest valid bound (slack >= 1).
  static DiscreteTarget with_slack(Eigen::VectorXd pi, Eigen::MatrixXd q, double slack,
                                   bool flipped, int initial = 0);

  State initial_state() const { return initial_; }
  State propose(State x, Rng& rng) const;
  bool in_support(State x) const { return x >= 0 && x < pi_.size(); }
  bool flipped() const { return flipped_; }

  /// Throws ModelContractError when the bound is below the decomposed mass.
  WeightedCoin weighted_coin_at(State from, State to) const;

  double exact_log_density(State x) const { return std::log(pi_(x)); }
  double log_proposal_density(State from, State to) const { return std::log(q_(from, to)); }

  const Eigen::VectorXd& pi() const noexcept { return pi_; }
  const Eigen::MatrixXd& q() const noexcept { return q_; }
  const Eigen::MatrixXd& bounds() const noexcept { return bounds_; }

 private:
  Eigen::VectorXd pi_;
  Eigen::MatrixXd q_;
  Eigen::MatrixXd bounds_;
  bool flipped_;
  int initial_;
};

}  // namespace portkey

#endif  // PORTKEY_MODELS_DISCRETE_TARGET_HPP
