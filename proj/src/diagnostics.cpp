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

#include "portkey/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace portkey {

namespace {

double mean_of(std::span<const double> xs) {
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return ss / static_cast<double>(xs.size() - 1);
}

}  // namespace

std::vector<double> acf(std::span<const double> series, std::size_t max_lag) {
  if (max_lag < 1 || series.size() <= max_lag) {
    throw std::invalid_argument("acf requires series length > max_lag >= 1");
  }
  const double m = mean_of(series);
  double denom = 0.0;
  for (double x : series) denom += (x - m) * (x - m);
  if (denom == 0.0) throw DegenerateSeries("acf of a constant series");

  std::vector<double> out(max_lag + 1);
  out[0] = 1.0;
  for (std::size_t k = 1; k <= max_lag; ++k) {
    double num = 0.0;
    for (std::size_t t = 0; t + k < series.size(); ++t) num += (series[t] - m) * (series[t + k] - m);
    out[k] = num / denom;
  }
  return out;
}

double batch_means_variance(std::span<const double> series, std::optional<std::size_t> batch_size) {
  const std::size_t n = series.size();
  const std::size_t b =
      batch_size.value_or(static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(n)))));
  if (b < 1) throw std::invalid_argument("batch size must be positive");
  const std::size_t batches = n / b;
  if (batches < 2) throw std::invalid_argument("need at least two batches");

  std::vector<double> means(batches);
  for (std::size_t k = 0; k < batches; ++k) means[k] = mean_of(series.subspan(k * b, b));
  const double grand = mean_of(means);
  double ss = 0.0;
  for (double m : means) ss += (m - grand) * (m - grand);
  return static_cast<double>(b) * ss / static_cast<double>(batches - 1);
}

double ess(std::span<const double> series, std::optional<std::size_t> batch_size) {
  if (series.size() < 100) throw std::invalid_argument("ess requires at least 100 draws");
  const double var = sample_variance(series);
  if (var == 0.0) throw DegenerateSeries("ess of a constant series");
  const double n = static_cast<double>(series.size());
  const double long_run = batch_means_variance(series, batch_size);
  if (long_run == 0.0) return n;
  return std::min(n, n * var / long_run);
}

double mcse(std::span<const double> series, std::optional<std::size_t> batch_size) {
  return std::sqrt(batch_means_variance(series, batch_size) / static_cast<double>(series.size()));
}

LoopStats loop_stats(std::span<const std::uint64_t> loops) {
  LoopStats stats;
  double total = 0.0;
  for (auto l : loops) {
    if (l == 0) continue;
    ++stats.factory_calls;
    total += static_cast<double>(l);
    stats.max = std::max(stats.max, l);
  }
  if (stats.factory_calls > 0) stats.mean = total / static_cast<double>(stats.factory_calls);
  return stats;
}

RunSummary summarize_columns(std::span<const std::vector<double>> columns,
                             std::span<const std::uint8_t> accepted,
                             std::span<const std::uint64_t> loops, double wall_time_sec) {
  if (columns.empty() || accepted.empty()) {
    throw std::invalid_argument("summarize requires a nonempty trace");
  }
  RunSummary summary;
  summary.ess = std::numeric_limits<double>::infinity();
  for (const auto& column : columns) {
    double e = 0.0;
    try {
      e = ess(column);
    } catch (const DegenerateSeries&) {
      // A chain that never moved carries no information.
      e = 0.0;
    } catch (const std::invalid_argument&) {
      e = std::numeric_limits<double>::quiet_NaN();  // too short to estimate
    }
    summary.ess = std::isnan(e) ? e : std::min(summary.ess, e);
  }
  summary.wall_time_sec = wall_time_sec;
  summary.ess_per_sec = wall_time_sec > 0.0 ? summary.ess / wall_time_sec : 0.0;
  const auto n_accepted = std::count(accepted.begin(), accepted.end(), std::uint8_t{1});
  summary.accept_rate = static_cast<double>(n_accepted) / static_cast<double>(accepted.size());
  const auto stats = loop_stats(loops);
  summary.mean_loops = stats.mean;
  summary.max_loops = stats.max;
  return summary;
}

}  // namespace portkey
