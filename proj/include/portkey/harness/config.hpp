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

#ifndef PORTKEY_HARNESS_CONFIG_HPP
#define PORTKEY_HARNESS_CONFIG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "portkey/kernel.hpp"
#include "portkey/models/correlation.hpp"
#include "portkey/models/weibull_mixture.hpp"

namespace portkey::harness {

enum class ModelKind { weibull, correlation };

std::string_view to_string(ModelKind kind);

/// Everything `run` needs. Serialised as an INI-style file:
///
///     [experiment]
///     model = weibull            ; or correlation
///     kernel = portkey
///     betas = 1, 0.99, 0.9, 0.75
///     n_steps = 100000
///     n_replications = 50
///     seed = 1
///     max_loops = 100000000
///     output_dir = out
///     trace_thin = 1
///     write_traces = true
///     threads = 1
///
///     [weibull]
///     k = 10
///     gamma_shape = 10
///     gamma_rate = 100
///     proposal_sd = 2
///     initial_theta = 0.1
///
///     [correlation]
///     data = data.csv
///     tau2 = 1
///     a0 = 3
///     b0 = 0.5
///     proposal_sd_r = 0.02
///     proposal_sd_mu = 0.35
///     proposal_sd_sigma2 = 0.1
///     initial_mu = 0
///     initial_sigma2 = 0.1
///     initial_r = identity       ; or sample (correlation matrix of the data)
///
/// For the correlation model each beta applies to both the mu and sigma2
/// factories and n_steps counts Gibbs sweeps.
struct ExperimentConfig {
  ModelKind model = ModelKind::weibull;
  KernelKind kernel = KernelKind::portkey;
  std::vector<double> betas{1.0};
  std::uint64_t n_steps = 100000;
  std::uint64_t n_replications = 1;
  std::uint64_t seed = 1;
  std::uint64_t max_loops = kDefaultMaxLoops;
  std::string output_dir = "out";
  std::uint64_t trace_thin = 1;
  bool write_traces = true;
  unsigned threads = 1;

  WeibullMixtureParams weibull;

  std::string data_path;
  CorrelationPriors priors;
  double proposal_sd_r = 0.02;
  double proposal_sd_mu = 0.35;
  double proposal_sd_sigma2 = 0.1;
  double initial_mu = 0.0;
  double initial_sigma2 = 0.1;
  bool initial_r_from_data = false;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&);
};

/// Thrown for malformed or out-of-range configuration; the message names the
/// offending `section.key`.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);
std::string write_config(const ExperimentConfig& config);

/// Checks every field against the module contracts.
void validate_config(const ExperimentConfig& config);

/// PORTKEY_SEED and PORTKEY_OUT override the seed and output directory.
void apply_env_overrides(ExperimentConfig& config);

}  // namespace portkey::harness

#endif  // PORTKEY_HARNESS_CONFIG_HPP
