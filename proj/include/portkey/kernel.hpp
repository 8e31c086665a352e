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

#ifndef PORTKEY_KERNEL_HPP
#define PORTKEY_KERNEL_HPP

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <exception>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "portkey/errors.hpp"
#include "portkey/factory.hpp"
#include "portkey/rng.hpp"

namespace portkey {

enum class KernelKind { barker_explicit, two_coin, portkey, flipped_portkey, mh_explicit };

std::string_view to_string(KernelKind kind);
std::optional<KernelKind> parse_kernel_kind(std::string_view name);

inline bool is_factory_kernel(KernelKind kind) {
  return kind == KernelKind::two_coin || kind == KernelKind::portkey ||
         kind == KernelKind::flipped_portkey;
}

/// What a model provides to run under the factory kernels.
///
/// `weighted_coin_at(x, y)` decomposes pi(x) q(x, y) as c * p, or its
/// reciprocal when `flipped()` is true. Models with a symmetric proposal may
/// drop q from the decomposition altogether.
template <class M>
concept TargetModel = requires(const M& model, const typename M::State& s, Rng& rng) {
  typename M::State;
  { model.initial_state() } -> std::convertible_to<typename M::State>;
  { model.propose(s, rng) } -> std::convertible_to<typename M::State>;
  { model.in_support(s) } -> std::convertible_to<bool>;
  { model.weighted_coin_at(s, s) } -> std::convertible_to<WeightedCoin>;
  { model.flipped() } -> std::convertible_to<bool>;
};

/// Validation targets whose (unnormalised) log density is computable.
template <class M>
concept ExactDensityModel = TargetModel<M> && requires(const M& model, const typename M::State& s) {
  { model.exact_log_density(s) } -> std::convertible_to<double>;
};

/// Models with an asymmetric proposal expose log q(from, to).
template <class M>
concept AsymmetricProposalModel =
    TargetModel<M> && requires(const M& model, const typename M::State& s) {
      { model.log_proposal_density(s, s) } -> std::convertible_to<double>;
    };

template <class State>
struct ChainState {
  State value{};
  std::uint64_t step_index = 0;
};

template <class State>
struct StepResult {
  ChainState<State> next;
  bool accepted = false;
  /// Empty when no factory ran (explicit kernels, out-of-support proposals).
  std::optional<FactoryOutcome> outcome;
};

/// Sampled states plus per-step acceptance and factory loop counts.
/// `loops[i]` is 0 where step i made no factory call.
template <class State>
struct ChainTrace {
  std::vector<State> states;
  std::vector<std::uint8_t> accepted;
  std::vector<std::uint64_t> loops;
  std::uint64_t seed = 0;
  KernelKind kernel_kind = KernelKind::two_coin;

  std::size_t size() const noexcept { return states.size(); }
};

namespace detail {

template <TargetModel M>
double log_pi_q(const M& model, const typename M::State& from, const typename M::State& to) {
  double value = model.exact_log_density(from);
  if constexpr (AsymmetricProposalModel<M>) value += model.log_proposal_density(from, to);
  return value;
}

template <TargetModel M>
void check_kernel_compatible(const M& model, KernelKind kind) {
  if (kind == KernelKind::flipped_portkey && !model.flipped()) {
    throw ModelContractError("flipped_portkey kernel requires a flipped model");
  }
  if ((kind == KernelKind::two_coin || kind == KernelKind::portkey) && model.flipped()) {
    throw ModelContractError("two_coin and portkey kernels require a non-flipped model");
  }
  if (!is_factory_kernel(kind) && !ExactDensityModel<M>) {
    throw ModelContractError("explicit kernels require exact_log_density");
  }
}

}  // namespace detail

/// One accept/reject move from `x`.
template <TargetModel M>
StepResult<typename M::State> step(const M& model, const ChainState<typename M::State>& x,
                                   KernelKind kind, PortkeyBeta beta, Rng& rng,
                                   std::uint64_t max_loops = kDefaultMaxLoops) {
  detail::check_kernel_compatible(model, kind);
  using State = typename M::State;
  State y = model.propose(x.value, rng);
  StepResult<State> result{{x.value, x.step_index + 1}, false, std::nullopt};
  if (!model.in_support(y)) return result;

  bool accept = false;
  switch (kind) {
    case KernelKind::two_coin:
      result.outcome = two_coin(model.weighted_coin_at(x.value, y), model.weighted_coin_at(y, x.value),
                                rng, max_loops);
      accept = result.outcome->accepted;
      break;
    case KernelKind::portkey:
      result.outcome = portkey_two_coin(model.weighted_coin_at(x.value, y),
                                        model.weighted_coin_at(y, x.value), beta, rng, max_loops);
      accept = result.outcome->accepted;
      break;
    case KernelKind::flipped_portkey:
      result.outcome = flipped_portkey_two_coin(model.weighted_coin_at(x.value, y),
                                                model.weighted_coin_at(y, x.value), beta, rng,
                                                max_loops);
      accept = result.outcome->accepted;
      break;
    case KernelKind::barker_explicit:
    case KernelKind::mh_explicit:
      if constexpr (ExactDensityModel<M>) {
        const double forward = detail::log_pi_q(model, x.value, y);
        const double backward = detail::log_pi_q(model, y, x.value);
        const double alpha = kind == KernelKind::barker_explicit
                                 ? 1.0 / (1.0 + std::exp(forward - backward))
                                 : std::min(1.0, std::exp(backward - forward));
        accept = bernoulli(rng, alpha);
      }
      break;
  }
  if (accept) {
    result.next.value = std::move(y);
    result.accepted = true;
  }
  return result;
}

/// Runs `n_steps` moves from the model's initial state. The trace holds the
/// state after every move; nothing is discarded as burn-in.
template <TargetModel M>
ChainTrace<typename M::State> run_chain(const M& model, KernelKind kind, PortkeyBeta beta,
                                        std::uint64_t n_steps, Rng& rng,
                                        std::uint64_t max_loops = kDefaultMaxLoops) {
  if (n_steps < 1) throw std::invalid_argument("run_chain requires n_steps >= 1");
  detail::check_kernel_compatible(model, kind);
  ChainTrace<typename M::State> trace;
  trace.kernel_kind = kind;
  trace.states.reserve(n_steps);
  trace.accepted.reserve(n_steps);
  trace.loops.reserve(n_steps);
  ChainState<typename M::State> current{model.initial_state(), 0};
  for (std::uint64_t i = 0; i < n_steps; ++i) {
    try {
      auto result = step(model, current, kind, beta, rng, max_loops);
      current = std::move(result.next);
      trace.accepted.push_back(result.accepted ? 1 : 0);
      trace.loops.push_back(result.outcome ? result.outcome->loops : 0);
      trace.states.push_back(current.value);
    } catch (const std::exception& e) {
      std::throw_with_nested(ChainStepError(i, e.what()));
    }
  }
  return trace;
}

/// Seeded convenience overload; identical seeds give identical traces.
template <TargetModel M>
ChainTrace<typename M::State> run_chain(const M& model, KernelKind kind, PortkeyBeta beta,
                                        std::uint64_t n_steps, std::uint64_t seed,
                                        std::uint64_t max_loops = kDefaultMaxLoops) {
  Rng rng = make_stream(seed);
  auto trace = run_chain(model, kind, beta, n_steps, rng, max_loops);
  trace.seed = seed;
  return trace;
}

/// How d(x, y) in alpha = pi(y)q(y,x) / (pi(x)q(x,y) + pi(y)q(y,x) + d(x,y))
/// is formed for the exact finite-state transition matrix.
enum class AcceptanceMode {
  portkey,  ///< aux(x, y) is the bound c on pi(x) q(x, y)
  flipped,  ///< aux(x, y) is the bound c~ on 1 / (pi(x) q(x, y))
  custom,   ///< aux(x, y) is d(x, y) itself, symmetric or not
};

/// Exact transition matrix of the accept/reject chain on a finite space
/// (at most 50 states). Off-diagonal entries are q(x, y) alpha(x, y); the
/// diagonal takes the remaining mass.
Eigen::MatrixXd finite_state_transition_matrix(const Eigen::VectorXd& pi, const Eigen::MatrixXd& q,
                                               double beta, AcceptanceMode mode,
                                               const Eigen::MatrixXd& aux);

/// max |pi(x) P(x, y) - pi(y) P(y, x)| over all pairs.
double detailed_balance_error(const Eigen::VectorXd& pi, const Eigen::MatrixXd& transition);

}  // namespace portkey

#endif  // PORTKEY_KERNEL_HPP
