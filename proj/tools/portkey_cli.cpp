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

// Command-line front end: run experiments, validate the factories, generate data.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "portkey/harness/config.hpp"
#include "portkey/harness/csv.hpp"
#include "portkey/harness/experiment.hpp"
#include "portkey/harness/validation.hpp"
#include "portkey/models/correlation.hpp"

namespace {

using namespace portkey;
using namespace portkey::harness;

Eigen::MatrixXd structure_matrix(const std::string& structure, int p) {
  if (structure == "identity") return Eigen::MatrixXd::Identity(p, p);
  const std::string equi = "equicorrelated:";
  if (structure.rfind(equi, 0) == 0) return equicorrelation(p, std::stod(structure.substr(equi.size())));
  const std::string custom = "custom:";
  if (structure.rfind(custom, 0) == 0) {
    Eigen::MatrixXd r = read_numeric_csv(structure.substr(custom.size())).values;
    if (r.rows() != r.cols()) throw std::invalid_argument("custom correlation CSV must be square");
    return r;
  }
  throw std::invalid_argument("unknown structure '" + structure +
                              "' (identity, equicorrelated:RHO, custom:PATH)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bernoulli factory MCMC experiments"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<unsigned> threads;

  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  run->add_option("--config", config_path, "INI config file")->required();
  run->add_option("--seed", seed, "Override the seed");
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_option("--threads", threads, "Worker threads");

  ValidationOptions vopts;
  auto* validate = app.add_subcommand("validate", "Check factories and models against oracles");
  validate->add_option("--seed", vopts.seed, "Seed for the validation draws");
  validate->add_option("--trials", vopts.trials, "Factory runs per grid cell");
  validate->add_option("--envelope-scale", vopts.envelope_scale,
                       "Scale the Weibull envelope (negative control when < 1)")
      ->group("");

  int n = 0;
  int p = 0;
  std::string structure = "identity";
  std::string gen_out = ".";
  std::string file_name = "data.csv";
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen-data", "Write synthetic N_p(0, R) data as CSV");
  gen->add_option("-n,--rows", n, "Number of observations")->required()->check(CLI::NonNegativeNumber);
  gen->add_option("-p,--dim", p, "Dimension")->required();
  gen->add_option("--structure", structure, "identity | equicorrelated:RHO | custom:PATH");
  gen->add_option("--seed", gen_seed, "Seed");
  gen->add_option("--out", gen_out, "Output directory");
  gen->add_option("--file", file_name, "Output file name");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      ExperimentConfig config = load_config(config_path);
      apply_env_overrides(config);
      if (seed) config.seed = *seed;
      if (out_dir) config.output_dir = *out_dir;
      if (threads) config.threads = *threads;
      const RunReport report = cmd_run(config);
      for (const auto& row : report.aggregate) {
        std::cout << "beta=" << format_double(row.beta) << " reps=" << row.replications
                  << " ess=" << row.ess.mean << " accept=" << row.accept_rate.mean
                  << " mean_loops=" << row.mean_loops.mean << " max_loops=" << row.max_loops.mean
                  << "\n";
      }
      for (const auto& row : report.rows) {
        if (row.failed()) {
          std::cerr << "beta=" << format_double(row.beta) << " rep=" << row.replication
                    << " failed: " << row.error << "\n";
        }
      }
      std::cout << "wrote " << report.files.size() << " files to " << config.output_dir << "\n";
      return report.failures == 0 ? 0 : 1;
    }
    if (validate->parsed()) {
      return report_validation(run_validation(vopts), std::cout) ? 0 : 1;
    }
    if (gen->parsed()) {
      if (p < 2) throw std::invalid_argument("gen-data requires p >= 2");
      const Eigen::MatrixXd r = structure_matrix(structure, p);
      if (r.rows() != p) throw std::invalid_argument("structure dimension does not match p");
      const std::string path = (std::filesystem::path(gen_out) / file_name).string();
      cmd_gen_data(n, r, gen_seed, path);
      std::cout << "wrote " << path << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
