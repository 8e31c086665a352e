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

#ifndef PORTKEY_ERRORS_HPP
#define PORTKEY_ERRORS_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace portkey {

/// A factory needed more passes than its budget allows. This usually means
/// the local bounds are far too loose for the proposal, not a bug.
class LoopBudgetExceeded : public std::runtime_error {
 public:
  explicit LoopBudgetExceeded(std::uint64_t budget)
      : std::runtime_error("Bernoulli factory exceeded its loop budget of " + std::to_string(budget)),
        budget_(budget) {}

  std::uint64_t budget() const noexcept { return budget_; }

 private:
  std::uint64_t budget_;
};

/// A model broke the weighted-coin contract (e.g. a bound below the density).
class ModelContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Statistic requested on a series without variation.
class DegenerateSeries : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Near-singular linear algebra where a well-conditioned answer is required.
class NumericalDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Failure inside a chain, tagged with the step that raised it. The original
/// exception is nested (std::rethrow_if_nested recovers it).
class ChainStepError : public std::runtime_error {
 public:
  ChainStepError(std::uint64_t step, const std::string& what)
      : std::runtime_error("step " + std::to_string(step) + ": " + what), step_(step) {}

  std::uint64_t step() const noexcept { return step_; }

 private:
  std::uint64_t step_;
};

}  // namespace portkey

#endif  // PORTKEY_ERRORS_HPP
