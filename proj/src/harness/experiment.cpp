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

#include "portkey/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <deque>
#include <exception>
#include <filesystem>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "portkey/harness/csv.hpp"

namespace portkey::harness {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

}  // namespace

WeibullRun run_weibull_replication(const WeibullMixtureParams& params, KernelKind kind,
                                   PortkeyBeta beta, std::uint64_t n_steps, Rng& rng,
                                   std::uint64_t max_loops) {
  const WeibullMixtureTarget target(params);
  const auto start = Clock::now();
  auto trace = run_chain(target, kind, beta, n_steps, rng, max_loops);
  const double wall = seconds_since(start);
  auto summary = summarize<double>(trace, [](const double& theta) { return theta; }, wall);
  return {std::move(trace), summary};
}

CorrelationRun run_correlation_replication(const Eigen::MatrixXd& data,
                                           const CorrelationPriors& priors,
                                           const CorrelationTuning& tuning,
                                           const CorrelationState& initial, std::uint64_t n_sweeps,
                                           Rng& rng) {
  CorrelationModel model(data, priors, tuning, initial);
  const int p = model.dimension();
  CorrelationTrace trace;
  trace.p = p;
  trace.columns.assign(static_cast<std::size_t>(n_correlations(p) + 2), {});
  for (auto& c : trace.columns) c.reserve(n_sweeps);

  const auto start = Clock::now();
  for (std::uint64_t s = 0; s < n_sweeps; ++s) {
    SweepOutcome out;
    try {
      out = model.gibbs_sweep(rng);
    } catch (const std::exception& e) {
      std::throw_with_nested(ChainStepError(s, e.what()));
    }
    const auto& st = model.state();
    std::size_t c = 0;
    for (int i = 0; i < p; ++i) {
      for (int j = i + 1; j < p; ++j) trace.columns[c++].push_back(st.r(i, j));
    }
    trace.columns[c++].push_back(st.mu);
    trace.columns[c].push_back(st.sigma2);
    trace.accepted_mu.push_back(out.mu.accepted ? 1 : 0);
    trace.loops_mu.push_back(out.mu.loops);
    trace.accepted_sigma2.push_back(out.sigma2.accepted ? 1 : 0);
    trace.loops_sigma2.push_back(out.sigma2.loops);
  }
  const double wall = seconds_since(start);

  CorrelationRun run;
  run.summary = summarize_columns(trace.columns, trace.accepted_mu, trace.loops_mu, wall);
  run.sigma2_summary = run.summary;
  const auto stats = loop_stats(trace.loops_sigma2);
  run.sigma2_summary.mean_loops = stats.mean;
  run.sigma2_summary.max_loops = stats.max;
  const auto n_acc = std::count(trace.accepted_sigma2.begin(), trace.accepted_sigma2.end(), 1);
  run.sigma2_summary.accept_rate =
      static_cast<double>(n_acc) / static_cast<double>(trace.accepted_sigma2.size());
  run.trace = std::move(trace);
  return run;
}

std::string weibull_trace_csv(const ChainTrace<double>& trace, std::uint64_t thin) {
  std::string text;
  CsvWriter csv(text);
  csv.field("step").field("theta").field("accepted").field("loops");
  csv.end_row();
  for (std::size_t i = 0; i < trace.size(); i += thin) {
    csv.field(static_cast<std::uint64_t>(i + 1))
        .field(trace.states[i])
        .field(static_cast<std::uint64_t>(trace.accepted[i]))
        .field(trace.loops[i]);
    csv.end_row();
  }
  return text;
}

std::string correlation_trace_csv(const CorrelationTrace& trace, std::uint64_t thin) {
  std::string text;
  CsvWriter csv(text);
  csv.field("step");
  for (int i = 0; i < trace.p; ++i) {
    for (int j = i + 1; j < trace.p; ++j) {
      csv.field("r_" + std::to_string(i + 1) + "_" + std::to_string(j + 1));
    }
  }
  csv.field("mu").field("sigma2");
  csv.field("accepted_mu").field("loops_mu").field("accepted_sigma2").field("loops_sigma2");
  csv.end_row();
  for (std::size_t t = 0; t < trace.size(); t += thin) {
    csv.field(static_cast<std::uint64_t>(t + 1));
    for (const auto& column : trace.columns) csv.field(column[t]);
    csv.field(static_cast<std::uint64_t>(trace.accepted_mu[t]))
        .field(trace.loops_mu[t])
        .field(static_cast<std::uint64_t>(trace.accepted_sigma2[t]))
        .field(trace.loops_sigma2[t]);
    csv.end_row();
  }
  return text;
}

MeanSe mean_se(std::span<const double> values) {
  MeanSe out;
  if (values.empty()) {
    out.mean = out.se = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double n = static_cast<double>(values.size());
  out.mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
  if (values.size() < 2) {
    out.se = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  double ss = 0.0;
  for (double v : values) ss += (v - out.mean) * (v - out.mean);
  out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  return out;
}

std::vector<AggregateRow> aggregate(std::span<const ReplicationRow> rows,
                                    std::span<const double> betas) {
  std::vector<AggregateRow> out;
  for (double beta : betas) {
    std::vector<double> ess, eps, acc, mean_l, max_l, acc2, mean_l2, max_l2;
    bool has_sigma2 = false;
    for (const auto& row : rows) {
      if (row.beta != beta || row.failed()) continue;
      ess.push_back(row.summary.ess);
      eps.push_back(row.summary.ess_per_sec);
      acc.push_back(row.summary.accept_rate);
      mean_l.push_back(row.summary.mean_loops);
      max_l.push_back(static_cast<double>(row.summary.max_loops));
      if (row.sigma2) {
        has_sigma2 = true;
        acc2.push_back(row.sigma2->accept_rate);
        mean_l2.push_back(row.sigma2->mean_loops);
        max_l2.push_back(static_cast<double>(row.sigma2->max_loops));
      }
    }
    AggregateRow agg;
    agg.beta = beta;
    agg.replications = ess.size();
    agg.ess = mean_se(ess);
    agg.ess_per_sec = mean_se(eps);
    agg.accept_rate = mean_se(acc);
    agg.mean_loops = mean_se(mean_l);
    agg.max_loops = mean_se(max_l);
    if (has_sigma2) {
      agg.accept_rate_sigma2 = mean_se(acc2);
      agg.mean_loops_sigma2 = mean_se(mean_l2);
      agg.max_loops_sigma2 = mean_se(max_l2);
    }
    out.push_back(agg);
  }
  return out;
}

std::string summary_csv(std::span<const ReplicationRow> rows, ModelKind model) {
  const bool corr = model == ModelKind::correlation;
  std::string text;
  CsvWriter csv(text);
  csv.field("beta").field("replication").field("ess").field("ess_per_sec").field("accept_rate");
  csv.field("mean_loops").field("max_loops").field("wall_time_sec");
  if (corr) csv.field("accept_rate_sigma2").field("mean_loops_sigma2").field("max_loops_sigma2");
  csv.field("error");
  csv.end_row();
  for (const auto& row : rows) {
    const auto& s = row.summary;
    csv.field(row.beta).field(row.replication).field(s.ess).field(s.ess_per_sec);
    csv.field(s.accept_rate).field(s.mean_loops).field(s.max_loops).field(s.wall_time_sec);
    if (corr) {
      const RunSummary s2 = row.sigma2.value_or(RunSummary{});
      csv.field(s2.accept_rate).field(s2.mean_loops).field(s2.max_loops);
    }
    std::string error = row.error;
    std::replace(error.begin(), error.end(), ',', ';');
    std::replace(error.begin(), error.end(), '\n', ' ');
    csv.field(error);
    csv.end_row();
  }
  return text;
}

std::string aggregate_csv(std::span<const AggregateRow> rows, ModelKind model) {
  const bool corr = model == ModelKind::correlation;
  std::string text;
  CsvWriter csv(text);
  csv.field("beta").field("replications");
  for (const char* name : {"ess", "ess_per_sec", "accept_rate", "mean_loops", "max_loops"}) {
    csv.field(name).field(std::string(name) + "_se");
  }
  if (corr) {
    for (const char* name : {"accept_rate_sigma2", "mean_loops_sigma2", "max_loops_sigma2"}) {
      csv.field(name).field(std::string(name) + "_se");
    }
  }
  csv.end_row();
  for (const auto& row : rows) {
    csv.field(row.beta).field(row.replications);
    for (const MeanSe* m :
         {&row.ess, &row.ess_per_sec, &row.accept_rate, &row.mean_loops, &row.max_loops}) {
      csv.field(m->mean).field(m->se);
    }
    if (corr) {
      for (const auto* m : {&row.accept_rate_sigma2, &row.mean_loops_sigma2, &row.max_loops_sigma2}) {
        const MeanSe v = m->value_or(MeanSe{std::numeric_limits<double>::quiet_NaN(),
                                            std::numeric_limits<double>::quiet_NaN()});
        csv.field(v.mean).field(v.se);
      }
    }
    csv.end_row();
  }
  return text;
}

std::string trace_file_name(double beta, std::uint64_t replication) {
  return "trace_beta-" + format_double(beta) + "_rep-" + std::to_string(replication) + ".csv";
}

namespace {

struct Task {
  std::size_t beta_index = 0;
  std::uint64_t replication = 0;
};

struct TaskResult {
  std::size_t order = 0;
  ReplicationRow row;
  std::string trace_text;
};

TaskResult execute(const ExperimentConfig& config, const Eigen::MatrixXd& data, const Task& task,
                   std::size_t order) {
  TaskResult result;
  result.order = order;
  result.row.beta = config.betas[task.beta_index];
  result.row.replication = task.replication;
  Rng rng = make_stream(config.seed, task.replication);
  try {
    if (config.model == ModelKind::weibull) {
      auto run = run_weibull_replication(config.weibull, config.kernel,
                                         PortkeyBeta(result.row.beta), config.n_steps, rng,
                                         config.max_loops);
      result.row.summary = run.summary;
      if (config.write_traces) result.trace_text = weibull_trace_csv(run.trace, config.trace_thin);
    } else {
      CorrelationTuning tuning;
      tuning.proposal_sd_r = config.proposal_sd_r;
      tuning.proposal_sd_mu = config.proposal_sd_mu;
      tuning.proposal_sd_sigma2 = config.proposal_sd_sigma2;
      tuning.beta_mu = tuning.beta_sigma2 = result.row.beta;
      tuning.kernel = config.kernel;
      tuning.max_loops = config.max_loops;
      CorrelationState initial =
          CorrelationModel::default_initial_state(static_cast<int>(data.cols()));
      if (config.initial_r_from_data) initial.r = sample_correlation(data);
      initial.mu = config.initial_mu;
      initial.sigma2 = config.initial_sigma2;
      auto run =
          run_correlation_replication(data, config.priors, tuning, initial, config.n_steps, rng);
      result.row.summary = run.summary;
      result.row.sigma2 = run.sigma2_summary;
      if (config.write_traces) {
        result.trace_text = correlation_trace_csv(run.trace, config.trace_thin);
      }
    }
  } catch (const std::exception& e) {
    result.row.error = e.what();
    result.trace_text.clear();
  }
  return result;
}

}  // namespace

RunReport cmd_run(const ExperimentConfig& config) {
  validate_config(config);
  namespace fs = std::filesystem;
  const fs::path out_dir(config.output_dir);
  fs::create_directories(out_dir);

  Eigen::MatrixXd data;
  if (config.model == ModelKind::correlation) data = read_numeric_csv(config.data_path).values;

  RunReport report;
  const std::string config_path = (out_dir / "config.ini").string();
  write_text_file(config_path, write_config(config));
  report.files.push_back(config_path);

  std::vector<Task> tasks;
  for (std::size_t b = 0; b < config.betas.size(); ++b) {
    for (std::uint64_t r = 0; r < config.n_replications; ++r) tasks.push_back({b, r});
  }

  std::mutex mutex;
  std::condition_variable ready;
  std::deque<TaskResult> finished;
  std::atomic<std::size_t> next{0};
  const unsigned n_threads =
      static_cast<unsigned>(std::min<std::size_t>(config.threads, tasks.size()));
  {
    std::vector<std::jthread> workers;
    for (unsigned t = 0; t < n_threads; ++t) {
      workers.emplace_back([&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
          TaskResult result = execute(config, data, tasks[i], i);
          std::lock_guard lock(mutex);
          finished.push_back(std::move(result));
          ready.notify_one();
        }
      });
    }

    // Single collector: the only writer of trace files.
    std::vector<ReplicationRow> rows(tasks.size());
    for (std::size_t received = 0; received < tasks.size(); ++received) {
      TaskResult result;
      {
        std::unique_lock lock(mutex);
        ready.wait(lock, [&] { return !finished.empty(); });
        result = std::move(finished.front());
        finished.pop_front();
      }
      if (!result.trace_text.empty()) {
        const auto path =
            (out_dir / trace_file_name(result.row.beta, result.row.replication)).string();
        write_text_file(path, result.trace_text);
      }
      rows[result.order] = std::move(result.row);
    }
    report.rows = std::move(rows);
  }

  for (const auto& row : report.rows) {
    if (row.failed()) ++report.failures;
    if (config.write_traces && !row.failed()) {
      report.files.push_back((out_dir / trace_file_name(row.beta, row.replication)).string());
    }
  }
  report.aggregate = aggregate(report.rows, config.betas);
  const auto summary_path = (out_dir / "summary.csv").string();
  write_text_file(summary_path, summary_csv(report.rows, config.model));
  const auto aggregate_path = (out_dir / "aggregate.csv").string();
  write_text_file(aggregate_path, aggregate_csv(report.aggregate, config.model));
  report.files.push_back(summary_path);
  report.files.push_back(aggregate_path);
  return report;
}

void cmd_gen_data(int n, const Eigen::MatrixXd& true_r, std::uint64_t seed,
                  const std::string& path) {
  Rng rng = make_stream(seed);
  const Eigen::MatrixXd data = synth_data(n, true_r, rng);
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  write_text_file(path, data_matrix_csv(data));
}

}  // namespace portkey::harness
