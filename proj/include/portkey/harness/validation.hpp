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

#ifndef PORTKEY_HARNESS_VALIDATION_HPP
#define PORTKEY_HARNESS_VALIDATION_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace portkey::harness {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationOptions {
  std::uint64_t seed = 20261018;
  /// Factory runs per grid cell.
  std::uint64_t trials = 20000;
  /// Multiplies the Weibull envelope in the envelope check. Values below 1
  /// make the check fail; used as a negative control.
  double envelope_scale = 1.0;
};

/// Acceptance frequency of all three factories against their closed forms
/// over the (c, p, beta) grid, within 4 binomial standard deviations per cell.
CheckResult check_factory_frequencies(const ValidationOptions& options);

/// Portkey loop counts against Geometric(s_beta): per-cell z statistics of
/// the mean pooled into a chi-square test at level 0.001, plus the tail
/// bound max loops <= 50 / (1 - beta) for beta < 1.
CheckResult check_geometric_loops(const ValidationOptions& options);

/// beta = 1 portkey and two-coin factories agree draw for draw on a shared stream.
CheckResult check_beta_one_reduction(const ValidationOptions& options);

/// Detailed balance to 1e-12 of exact transition matrices on random finite
/// targets (portkey and flipped), and its failure for an asymmetric d.
CheckResult check_detailed_balance(const ValidationOptions& options);

/// Acceptance orderings over random tuples, plain and flipped.
CheckResult check_orderings(const ValidationOptions& options);

/// Weibull density below k / (e theta) over random (theta, lambda) pairs.
CheckResult check_envelope(const ValidationOptions& options);

/// r_bounds against an eigenvalue scan with bisection, to 1e-6.
CheckResult check_r_bounds(const ValidationOptions& options);

std::vector<CheckResult> run_validation(const ValidationOptions& options);

/// Prints one line per check; returns true iff all passed.
bool report_validation(const std::vector<CheckResult>& results, std::ostream& out);

}  // namespace portkey::harness

#endif  // PORTKEY_HARNESS_VALIDATION_HPP
