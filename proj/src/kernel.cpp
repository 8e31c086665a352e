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

#include "portkey/kernel.hpp"

#include <stdexcept>

namespace portkey {

std::string_view to_string(KernelKind kind) {
  switch (kind) {
    case KernelKind::barker_explicit: return "barker_explicit";
    case KernelKind::two_coin: return "two_coin";
    case KernelKind::portkey: return "portkey";
    case KernelKind::flipped_portkey: return "flipped_portkey";
    case KernelKind::mh_explicit: return "mh_explicit";
  }
  return "unknown";
}

std::optional<KernelKind> parse_kernel_kind(std::string_view name) {
  for (auto kind : {KernelKind::barker_explicit, KernelKind::two_coin, KernelKind::portkey,
                    KernelKind::flipped_portkey, KernelKind::mh_explicit}) {
    if (to_string(kind) == name) return kind;
  }
  return std::nullopt;
}

Eigen::MatrixXd finite_state_transition_matrix(const Eigen::VectorXd& pi, const Eigen::MatrixXd& q,
                                               double beta, AcceptanceMode mode,
                                               const Eigen::MatrixXd& aux) {
  const Eigen::Index n = pi.size();
  if (n < 1 || n > 50) throw std::invalid_argument("state count must be in [1, 50]");
  if (q.rows() != n || q.cols() != n || aux.rows() != n || aux.cols() != n) {
    throw std::invalid_argument("dimension mismatch");
  }
  if ((pi.array() <= 0.0).any() || std::abs(pi.sum() - 1.0) > 1e-9) {
    throw std::invalid_argument("pi must be positive and sum to 1");
  }
  if ((q.array() < 0.0).any() || ((q.rowwise().sum().array() - 1.0).abs() > 1e-9).any()) {
    throw std::invalid_argument("q must be row stochastic");
  }
  if (!(beta > 0.0 && beta <= 1.0)) throw std::domain_error("beta must lie in (0, 1]");

  Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index x = 0; x < n; ++x) {
    for (Eigen::Index y = 0; y < n; ++y) {
      if (x == y || q(x, y) == 0.0) continue;
      if (q(y, x) == 0.0) continue;  // reverse move impossible: alpha = 0
      const double mass_x = pi(x) * q(x, y);
      const double mass_y = pi(y) * q(y, x);
      double alpha = 0.0;
      switch (mode) {
        case AcceptanceMode::portkey:
          alpha = analytic_alpha_portkey(aux(x, y), mass_x / aux(x, y), aux(y, x),
                                         mass_y / aux(y, x), beta);
          break;
        case AcceptanceMode::flipped:
          alpha = analytic_alpha_flipped(aux(x, y), 1.0 / (mass_x * aux(x, y)), aux(y, x),
                                         1.0 / (mass_y * aux(y, x)), beta);
          break;
        case AcceptanceMode::custom:
          alpha = mass_y / (mass_x + mass_y + aux(x, y));
          break;
      }
      transition(x, y) = q(x, y) * alpha;
    }
    transition(x, x) = 1.0 - transition.row(x).sum();
  }
  return transition;
}

double detailed_balance_error(const Eigen::VectorXd& pi, const Eigen::MatrixXd& transition) {
  const Eigen::MatrixXd flow = pi.asDiagonal() * transition;
  return (flow - flow.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace portkey
