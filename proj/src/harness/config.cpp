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

#include "portkey/harness/config.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "portkey/harness/csv.hpp"

namespace portkey::harness {

namespace pt = boost::property_tree;

std::string_view to_string(ModelKind kind) {
  return kind == ModelKind::weibull ? "weibull" : "correlation";
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
  return a.model == b.model && a.kernel == b.kernel && a.betas == b.betas &&
         a.n_steps == b.n_steps && a.n_replications == b.n_replications && a.seed == b.seed &&
         a.max_loops == b.max_loops && a.output_dir == b.output_dir &&
         a.trace_thin == b.trace_thin && a.write_traces == b.write_traces &&
         a.threads == b.threads && a.weibull == b.weibull && a.data_path == b.data_path &&
         a.priors == b.priors && a.proposal_sd_r == b.proposal_sd_r &&
         a.proposal_sd_mu == b.proposal_sd_mu && a.proposal_sd_sigma2 == b.proposal_sd_sigma2 &&
         a.initial_mu == b.initial_mu && a.initial_sigma2 == b.initial_sigma2 &&
         a.initial_r_from_data == b.initial_r_from_data;
}

namespace {

std::string trimmed(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  const auto last = s.find_last_not_of(" \t\r");
  return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string text = trimmed(raw);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": expected a number, got '" + raw + "'");
  }
  return v;
}

std::uint64_t to_u64(const std::string& key, const std::string& raw) {
  const std::string text = trimmed(raw);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw ConfigError(key + ": expected a nonnegative integer, got '" + raw + "'");
  }
  return v;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string text = trimmed(raw);
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError(key + ": expected true or false, got '" + raw + "'");
}

// Reads `section.key` into `target` when present.
template <class Convert, class T>
void read(const pt::ptree& tree, const std::string& key, T& target, Convert convert) {
  if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'))) {
    target = static_cast<T>(convert(key, *v));
  }
}

std::string join_betas(const std::vector<double>& betas) {
  std::string out;
  for (std::size_t i = 0; i < betas.size(); ++i) {
    if (i) out += ", ";
    out += format_double(betas[i]);
  }
  return out;
}

}  // namespace

ExperimentConfig parse_config(std::istream& in) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config syntax: ") + e.what());
  }

  static const std::vector<std::string> known = {
      "experiment.model", "experiment.kernel", "experiment.betas", "experiment.n_steps",
      "experiment.n_replications", "experiment.seed", "experiment.max_loops",
      "experiment.output_dir", "experiment.trace_thin", "experiment.write_traces",
      "experiment.threads", "weibull.k", "weibull.gamma_shape", "weibull.gamma_rate",
      "weibull.proposal_sd", "weibull.initial_theta", "correlation.data", "correlation.tau2",
      "correlation.a0", "correlation.b0", "correlation.proposal_sd_r",
      "correlation.proposal_sd_mu", "correlation.proposal_sd_sigma2", "correlation.initial_mu",
      "correlation.initial_sigma2", "correlation.initial_r"};
  for (const auto& [section, body] : tree) {
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (std::find(known.begin(), known.end(), full) == known.end()) {
        throw ConfigError(full + ": unknown key");
      }
    }
  }

  ExperimentConfig c;
  const auto as_string = [](const std::string&, const std::string& v) { return trimmed(v); };
  std::string model = std::string(to_string(c.model));
  read(tree, "experiment.model", model, as_string);
  if (model == "weibull") {
    c.model = ModelKind::weibull;
  } else if (model == "correlation") {
    c.model = ModelKind::correlation;
  } else {
    throw ConfigError("experiment.model: expected weibull or correlation, got '" + model + "'");
  }
  std::string kernel = std::string(to_string(c.kernel));
  read(tree, "experiment.kernel", kernel, as_string);
  if (auto k = parse_kernel_kind(kernel)) {
    c.kernel = *k;
  } else {
    throw ConfigError("experiment.kernel: unknown kernel '" + kernel + "'");
  }
  if (auto v = tree.get_optional<std::string>("experiment.betas")) {
    c.betas.clear();
    std::stringstream list(*v);
    std::string item;
    while (std::getline(list, item, ',')) c.betas.push_back(to_double("experiment.betas", item));
  }
  read(tree, "experiment.n_steps", c.n_steps, to_u64);
  read(tree, "experiment.n_replications", c.n_replications, to_u64);
  read(tree, "experiment.seed", c.seed, to_u64);
  read(tree, "experiment.max_loops", c.max_loops, to_u64);
  read(tree, "experiment.output_dir", c.output_dir, as_string);
  read(tree, "experiment.trace_thin", c.trace_thin, to_u64);
  read(tree, "experiment.write_traces", c.write_traces, to_bool);
  read(tree, "experiment.threads", c.threads, to_u64);

  read(tree, "weibull.k", c.weibull.shape_k, to_double);
  read(tree, "weibull.gamma_shape", c.weibull.gamma_shape, to_double);
  read(tree, "weibull.gamma_rate", c.weibull.gamma_rate, to_double);
  read(tree, "weibull.proposal_sd", c.weibull.proposal_sd, to_double);
  read(tree, "weibull.initial_theta", c.weibull.initial_theta, to_double);

  read(tree, "correlation.data", c.data_path, as_string);
  read(tree, "correlation.tau2", c.priors.tau2, to_double);
  read(tree, "correlation.a0", c.priors.a0, to_double);
  read(tree, "correlation.b0", c.priors.b0, to_double);
  read(tree, "correlation.proposal_sd_r", c.proposal_sd_r, to_double);
  read(tree, "correlation.proposal_sd_mu", c.proposal_sd_mu, to_double);
  read(tree, "correlation.proposal_sd_sigma2", c.proposal_sd_sigma2, to_double);
  read(tree, "correlation.initial_mu", c.initial_mu, to_double);
  read(tree, "correlation.initial_sigma2", c.initial_sigma2, to_double);
  std::string initial_r = c.initial_r_from_data ? "sample" : "identity";
  read(tree, "correlation.initial_r", initial_r, as_string);
  if (initial_r != "identity" && initial_r != "sample") {
    throw ConfigError("correlation.initial_r: expected identity or sample, got '" + initial_r + "'");
  }
  c.initial_r_from_data = initial_r == "sample";
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  return parse_config(in);
}

std::string write_config(const ExperimentConfig& c) {
  std::ostringstream out;
  out << "[experiment]\n"
      << "model = " << to_string(c.model) << "\n"
      << "kernel = " << to_string(c.kernel) << "\n"
      << "betas = " << join_betas(c.betas) << "\n"
      << "n_steps = " << c.n_steps << "\n"
      << "n_replications = " << c.n_replications << "\n"
      << "seed = " << c.seed << "\n"
      << "max_loops = " << c.max_loops << "\n"
      << "output_dir = " << c.output_dir << "\n"
      << "trace_thin = " << c.trace_thin << "\n"
      << "write_traces = " << (c.write_traces ? "true" : "false") << "\n"
      << "threads = " << c.threads << "\n"
      << "\n[weibull]\n"
      << "k = " << format_double(c.weibull.shape_k) << "\n"
      << "gamma_shape = " << format_double(c.weibull.gamma_shape) << "\n"
      << "gamma_rate = " << format_double(c.weibull.gamma_rate) << "\n"
      << "proposal_sd = " << format_double(c.weibull.proposal_sd) << "\n"
      << "initial_theta = " << format_double(c.weibull.initial_theta) << "\n"
      << "\n[correlation]\n";
  if (!c.data_path.empty()) out << "data = " << c.data_path << "\n";
  out << "tau2 = " << format_double(c.priors.tau2) << "\n"
      << "a0 = " << format_double(c.priors.a0) << "\n"
      << "b0 = " << format_double(c.priors.b0) << "\n"
      << "proposal_sd_r = " << format_double(c.proposal_sd_r) << "\n"
      << "proposal_sd_mu = " << format_double(c.proposal_sd_mu) << "\n"
      << "proposal_sd_sigma2 = " << format_double(c.proposal_sd_sigma2) << "\n"
      << "initial_mu = " << format_double(c.initial_mu) << "\n"
      << "initial_sigma2 = " << format_double(c.initial_sigma2) << "\n"
      << "initial_r = " << (c.initial_r_from_data ? "sample" : "identity") << "\n";
  return out.str();
}

void validate_config(const ExperimentConfig& c) {
  auto require = [](bool ok, const std::string& message) {
    if (!ok) throw ConfigError(message);
  };
  require(!c.betas.empty(), "experiment.betas: must list at least one value");
  for (double b : c.betas) {
    require(b > 0.0 && b <= 1.0, "experiment.betas: " + format_double(b) + " outside (0, 1]");
  }
  require(c.n_steps >= 1, "experiment.n_steps: must be >= 1");
  require(c.n_replications >= 1, "experiment.n_replications: must be >= 1");
  require(c.max_loops >= 1, "experiment.max_loops: must be >= 1");
  require(c.trace_thin >= 1, "experiment.trace_thin: must be >= 1");
  require(c.threads >= 1, "experiment.threads: must be >= 1");
  require(!c.output_dir.empty(), "experiment.output_dir: must not be empty");

  if (c.model == ModelKind::weibull) {
    require(c.kernel != KernelKind::flipped_portkey,
            "experiment.kernel: the weibull model has no flipped decomposition");
    try {
      c.weibull.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string(e.what()));
    }
  } else {
    require(c.kernel == KernelKind::flipped_portkey || c.kernel == KernelKind::two_coin,
            "experiment.kernel: the correlation model supports flipped_portkey or two_coin");
    require(!c.data_path.empty(), "correlation.data: path to a data CSV is required");
    require(c.priors.tau2 > 0.0, "correlation.tau2: must be positive");
    require(c.priors.a0 > 0.0, "correlation.a0: must be positive");
    require(c.priors.b0 > 0.0, "correlation.b0: must be positive");
    require(c.proposal_sd_r > 0.0, "correlation.proposal_sd_r: must be positive");
    require(c.proposal_sd_mu > 0.0, "correlation.proposal_sd_mu: must be positive");
    require(c.proposal_sd_sigma2 > 0.0, "correlation.proposal_sd_sigma2: must be positive");
    require(c.initial_sigma2 > 0.0, "correlation.initial_sigma2: must be positive");
  }
}

void apply_env_overrides(ExperimentConfig& config) {
  if (const char* seed = std::getenv("PORTKEY_SEED")) {
    config.seed = to_u64("PORTKEY_SEED", seed);
  }
  if (const char* out = std::getenv("PORTKEY_OUT")) {
    config.output_dir = out;
  }
}

}  // namespace portkey::harness
