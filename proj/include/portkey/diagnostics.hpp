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

#ifndef PORTKEY_DIAGNOSTICS_HPP
#define PORTKEY_DIAGNOSTICS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "portkey/kernel.hpp"

namespace portkey {

/// Sample autocorrelations at lags 0..max_lag (lag 0 is exactly 1).
/// Throws DegenerateSeries for a constant series.
std::vector<double> acf(std::span<const double> series, std::size_t max_lag);

/// Non-overlapping batch means estimate of the long-run variance of the
/// series mean. Batch size defaults to floor(sqrt(n)); the trailing
/// n mod batch_size draws are dropped.
double batch_means_variance(std::span<const double> series,
                            std::optional<std::size_t> batch_size = std::nullopt);

/// Effective sample size n * s^2 / sigma^2_BM, capped at n.
/// Requires at least 100 draws; throws DegenerateSeries for zero variance.
double ess(std::span<const double> series, std::optional<std::size_t> batch_size = std::nullopt);

/// Monte Carlo standard error of the series mean, sqrt(sigma^2_BM / n).
double mcse(std::span<const double> series, std::optional<std::size_t> batch_size = std::nullopt);

struct LoopStats {
  double mean = 0.0;          ///< over factory calls only; 0 if there were none
  std::uint64_t max = 0;
  std::uint64_t factory_calls = 0;
};

/// Loop statistics over the nonzero entries of a per-step loop sequence.
LoopStats loop_stats(std::span<const std::uint64_t> loops);

struct RunSummary {
  double ess = 0.0;
  double ess_per_sec = 0.0;
  double accept_rate = 0.0;
  double mean_loops = 0.0;
  std::uint64_t max_loops = 0;
  double wall_time_sec = 0.0;
};

/// Builds a RunSummary. With several columns (multivariate state) the ESS is
/// the smallest componentwise ESS; NaN when the trace is too short for one.
RunSummary summarize_columns(std::span<const std::vector<double>> columns,
                             std::span<const std::uint8_t> accepted,
                             std::span<const std::uint64_t> loops, double wall_time_sec);

template <class State>
RunSummary summarize(const ChainTrace<State>& trace, const std::function<double(const State&)>& g,
                     double wall_time_sec) {
  if (trace.size() == 0) throw std::invalid_argument("summarize requires a nonempty trace");
  std::vector<std::vector<double>> column(1);
  column[0].reserve(trace.size());
  for (const auto& s : trace.states) column[0].push_back(g(s));
  return summarize_columns(column, trace.accepted, trace.loops, wall_time_sec);
}

}  // namespace portkey

#endif  // PORTKEY_DIAGNOSTICS_HPP
