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

#ifndef PORTKEY_HARNESS_EXPERIMENT_HPP
#define PORTKEY_HARNESS_EXPERIMENT_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "portkey/diagnostics.hpp"
#include "portkey/harness/config.hpp"
#include "portkey/kernel.hpp"
#include "portkey/models/correlation.hpp"
#include "portkey/models/weibull_mixture.hpp"

namespace portkey::harness {

struct WeibullRun {
  ChainTrace<double> trace;
  RunSummary summary;
};

/// One Weibull-mixture chain, timed around the sampling loop only.
WeibullRun run_weibull_replication(const WeibullMixtureParams& params, KernelKind kind,
                                   PortkeyBeta beta, std::uint64_t n_steps, Rng& rng,
                                   std::uint64_t max_loops = kDefaultMaxLoops);

/// Per-sweep record of a correlation chain. `columns` holds one series per
/// free correlation (r_12, r_13, ..., row-major over i < j), then mu, then sigma2.
struct CorrelationTrace {
  int p = 0;
  std::vector<std::vector<double>> columns;
  std::vector<std::uint8_t> accepted_mu;
  std::vector<std::uint64_t> loops_mu;
  std::vector<std::uint8_t> accepted_sigma2;
  std::vector<std::uint64_t> loops_sigma2;

  std::size_t size() const noexcept { return loops_mu.size(); }
  std::span<const double> mu() const { return columns[columns.size() - 2]; }
  std::span<const double> sigma2() const { return columns.back(); }
};

struct CorrelationRun {
  CorrelationTrace trace;
  /// ESS is the minimum over all columns; acceptance and loops refer to mu.
  RunSummary summary;
  /// Same ESS and timing; acceptance and loops of the sigma2 factory.
  RunSummary sigma2_summary;
};

CorrelationRun run_correlation_replication(const Eigen::MatrixXd& data,
                                           const CorrelationPriors& priors,
                                           const CorrelationTuning& tuning,
                                           const CorrelationState& initial, std::uint64_t n_sweeps,
                                           Rng& rng);

std::string weibull_trace_csv(const ChainTrace<double>& trace, std::uint64_t thin = 1);
std::string correlation_trace_csv(const CorrelationTrace& trace, std::uint64_t thin = 1);

struct ReplicationRow {
  double beta = 1.0;
  std::uint64_t replication = 0;
  RunSummary summary;
  std::optional<RunSummary> sigma2;  ///< correlation model only
  std::string error;                 ///< nonempty when the run failed

  bool failed() const { return !error.empty(); }
};

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;  ///< sample sd / sqrt(count); NaN for a single value
};

MeanSe mean_se(std::span<const double> values);

struct AggregateRow {
  double beta = 1.0;
  std::uint64_t replications = 0;
  MeanSe ess, ess_per_sec, accept_rate, mean_loops, max_loops;
  std::optional<MeanSe> accept_rate_sigma2, mean_loops_sigma2, max_loops_sigma2;
};

/// One row per beta (in `betas` order) over its successful replications.
std::vector<AggregateRow> aggregate(std::span<const ReplicationRow> rows,
                                    std::span<const double> betas);

std::string summary_csv(std::span<const ReplicationRow> rows, ModelKind model);
std::string aggregate_csv(std::span<const AggregateRow> rows, ModelKind model);

struct RunReport {
  std::vector<ReplicationRow> rows;
  std::vector<AggregateRow> aggregate;
  std::size_t failures = 0;
  std::vector<std::string> files;
};

/// Runs every (beta, replication) pair and writes, under output_dir:
/// config.ini, trace_beta-<b>_rep-<r>.csv (when enabled), summary.csv and
/// aggregate.csv. Replication r draws from stream (seed, r) for every beta.
RunReport cmd_run(const ExperimentConfig& config);

/// Writes n synthetic rows from N_p(0, true_r) as CSV to `path`.
void cmd_gen_data(int n, const Eigen::MatrixXd& true_r, std::uint64_t seed,
                  const std::string& path);

/// File name used for replication traces.
std::string trace_file_name(double beta, std::uint64_t replication);

}  // namespace portkey::harness

#endif  // PORTKEY_HARNESS_EXPERIMENT_HPP
