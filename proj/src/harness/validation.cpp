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

#include "portkey/harness/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "portkey/factory.hpp"
#include "portkey/kernel.hpp"
#include "portkey/models/correlation.hpp"
#include "portkey/models/weibull_mixture.hpp"
#include "portkey/rng.hpp"

namespace portkey::harness {

namespace {

constexpr double kGridC[] = {0.5, 1.0, 2.0, 10.0};
constexpr double kGridP[] = {0.05, 0.25, 0.5, 0.95};
constexpr double kGridBeta[] = {1.0, 0.99, 0.9, 0.5};

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(std::log(lo) + uniform01(rng) * (std::log(hi) - std::log(lo)));
}

// Random positive definite correlation matrix from a Wishart-like draw.
Eigen::MatrixXd random_correlation(int p, Rng& rng) {
  Eigen::MatrixXd a(p, p + 2);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = standard_normal(rng);
  }
  const Eigen::MatrixXd s = a * a.transpose();
  const Eigen::VectorXd d = s.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd r = d.asDiagonal() * s * d.asDiagonal();
  r.diagonal().setOnes();
  return r;
}

bool min_eigen_positive(const Eigen::MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly)
             .eigenvalues()
             .minCoeff() > 0.0;
}

}  // namespace

CheckResult check_factory_frequencies(const ValidationOptions& options) {
  CheckResult result{"factory_frequencies", true, ""};
  Rng rng = make_stream(options.seed, 1);
  const double n = static_cast<double>(options.trials);
  std::size_t cells = 0;
  std::size_t failures = 0;
  double worst = 0.0;
  for (double cx : kGridC)
    for (double cy : kGridC)
      for (double px : kGridP)
        for (double py : kGridP)
          for (double beta : kGridBeta) {
            const WeightedCoin x(cx, PCoin::with_known_p(px));
            const WeightedCoin y(cy, PCoin::with_known_p(py));
            const PortkeyBeta b(beta);
            for (int factory = 0; factory < 3; ++factory) {
              if (factory == 0 && beta != 1.0) continue;  // two-coin has no gate
              double expected = 0.0;
              std::uint64_t hits = 0;
              for (std::uint64_t t = 0; t < options.trials; ++t) {
                FactoryOutcome out;
                if (factory == 0) {
                  out = two_coin(x, y, rng);
                } else if (factory == 1) {
                  out = portkey_two_coin(x, y, b, rng);
                } else {
                  out = flipped_portkey_two_coin(x, y, b, rng);
                }
                hits += out.accepted ? 1 : 0;
              }
              expected = factory == 2 ? analytic_alpha_flipped(cx, px, cy, py, beta)
                                      : analytic_alpha_portkey(cx, px, cy, py, beta);
              const double sd = std::sqrt(expected * (1.0 - expected) / n);
              const double z = std::abs(static_cast<double>(hits) / n - expected) / sd;
              worst = std::max(worst, z);
              ++cells;
              if (z > 4.0) ++failures;
            }
          }
  result.passed = failures == 0;
  std::ostringstream detail;
  detail << cells << " cells, " << failures << " beyond 4 sd, max |z| = " << worst;
  result.detail = detail.str();
  return result;
}

CheckResult check_geometric_loops(const ValidationOptions& options) {
  CheckResult result{"geometric_loops", true, ""};
  Rng rng = make_stream(options.seed, 2);
  const double n = static_cast<double>(options.trials);
  double chi2 = 0.0;
  std::size_t cells = 0;
  std::size_t tail_violations = 0;
  for (double cx : kGridC)
    for (double cy : kGridC)
      for (double px : kGridP)
        for (double py : kGridP)
          for (double beta : kGridBeta) {
            const WeightedCoin x(cx, PCoin::with_known_p(px));
            const WeightedCoin y(cy, PCoin::with_known_p(py));
            double total = 0.0;
            std::uint64_t max_loops = 0;
            for (std::uint64_t t = 0; t < options.trials; ++t) {
              const auto out = portkey_two_coin(x, y, PortkeyBeta(beta), rng);
              total += static_cast<double>(out.loops);
              max_loops = std::max(max_loops, out.loops);
            }
            const double s = termination_probability(cx, px, cy, py, beta);
            const double se = std::sqrt((1.0 - s) / (s * s) / n);
            if (se > 0.0) {
              const double z = (total / n - 1.0 / s) / se;
              chi2 += z * z;
              ++cells;
            }
            if (beta < 1.0 && static_cast<double>(max_loops) > 50.0 / (1.0 - beta)) {
              ++tail_violations;
            }
          }
  const boost::math::chi_squared dist(static_cast<double>(cells));
  const double p_value = boost::math::cdf(boost::math::complement(dist, chi2));
  result.passed = p_value > 0.001 && tail_violations == 0;
  std::ostringstream detail;
  detail << "pooled chi2 = " << chi2 << " on " << cells << " df (p = " << p_value
         << "), tail violations = " << tail_violations;
  result.detail = detail.str();
  return result;
}

CheckResult check_beta_one_reduction(const ValidationOptions& options) {
  CheckResult result{"beta_one_reduction", true, ""};
  Rng pick = make_stream(options.seed, 3);
  std::size_t mismatches = 0;
  for (int cell = 0; cell < 200; ++cell) {
    const WeightedCoin x(log_uniform(pick, 0.1, 10.0), PCoin::with_known_p(uniform01(pick)));
    const WeightedCoin y(log_uniform(pick, 0.1, 10.0),
                         PCoin::with_known_p(0.01 + 0.99 * uniform01(pick)));
    Rng a = make_stream(options.seed + static_cast<std::uint64_t>(cell), 4);
    Rng b = a;
    for (int t = 0; t < 500; ++t) {
      if (two_coin(x, y, a) != portkey_two_coin(x, y, PortkeyBeta::one(), b)) ++mismatches;
    }
  }
  result.passed = mismatches == 0;
  result.detail = std::to_string(mismatches) + " mismatching outcomes over 100000 draws";
  return result;
}

CheckResult check_detailed_balance(const ValidationOptions& options) {
  CheckResult result{"detailed_balance", true, ""};
  Rng rng = make_stream(options.seed, 5);
  double worst = 0.0;
  double weakest_violation = std::numeric_limits<double>::infinity();
  for (int target = 0; target < 100; ++target) {
    const int n = 3 + static_cast<int>(uniform01(rng) * 8.0);
    Eigen::VectorXd pi(n);
    for (int i = 0; i < n; ++i) pi(i) = 0.05 + uniform01(rng);
    pi /= pi.sum();
    Eigen::MatrixXd q(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) q(i, j) = 0.05 + uniform01(rng);
      q.row(i) /= q.row(i).sum();
    }
    const double beta = 0.05 + 0.95 * uniform01(rng);
    Eigen::MatrixXd c(n, n), ct(n, n), d(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        const double mass = pi(i) * q(i, j);
        c(i, j) = mass * (1.0 + 3.0 * uniform01(rng));
        ct(i, j) = (1.0 + 3.0 * uniform01(rng)) / mass;
        d(i, j) = uniform01(rng);
      }
    }
    for (auto [mode, aux] : {std::pair{AcceptanceMode::portkey, &c},
                             std::pair{AcceptanceMode::flipped, &ct}}) {
      const auto p = finite_state_transition_matrix(pi, q, beta, mode, *aux);
      worst = std::max(worst, detailed_balance_error(pi, p));
    }
    const auto asym = finite_state_transition_matrix(pi, q, beta, AcceptanceMode::custom, d);
    weakest_violation = std::min(weakest_violation, detailed_balance_error(pi, asym));
  }
  result.passed = worst <= 1e-12 && weakest_violation > 1e-9;
  std::ostringstream detail;
  detail << "max symmetric-d error = " << worst
         << ", min asymmetric-d error = " << weakest_violation;
  result.detail = detail.str();
  return result;
}

CheckResult check_orderings(const ValidationOptions& options) {
  CheckResult result{"acceptance_orderings", true, ""};
  Rng rng = make_stream(options.seed, 6);
  std::size_t failures = 0;
  for (int t = 0; t < 10000; ++t) {
    const double delta = 0.001 + 0.998 * uniform01(rng);
    auto draw_p = [&] { return delta + (1.0 - delta) * uniform01(rng); };
    const double cx = log_uniform(rng, 0.01, 100.0);
    const double cy = log_uniform(rng, 0.01, 100.0);
    const double px = draw_p();
    const double py = draw_p();
    const double beta = t % 10 == 0 ? 1.0 : 1.0 - 0.999 * uniform01(rng);
    const auto plain = ordering_check(cx, px, cy, py, beta, delta);
    const auto flipped = ordering_check_flipped(cx, px, cy, py, beta, delta);
    if (!plain.lhs_ok || !plain.rhs_ok || !flipped.lhs_ok || !flipped.rhs_ok) ++failures;
  }
  result.passed = failures == 0;
  result.detail = std::to_string(failures) + " of 10000 tuples violated an ordering";
  return result;
}

CheckResult check_envelope(const ValidationOptions& options) {
  CheckResult result{"weibull_envelope", true, ""};
  Rng rng = make_stream(options.seed, 7);
  std::size_t failures = 0;
  for (int t = 0; t < 10000; ++t) {
    const double theta = log_uniform(rng, 1e-3, 10.0);
    const double k = log_uniform(rng, 0.5, 20.0);
    // Half the draws sit near the maximiser lambda = theta.
    const double lambda = t % 2 ? log_uniform(rng, 1e-3, 10.0) : theta * log_uniform(rng, 0.9, 1.1);
    const double bound = options.envelope_scale * weibull_envelope(theta, k);
    if (weibull_density(theta, lambda, k) > bound * (1.0 + 1e-12) + 1e-12) ++failures;
  }
  result.passed = failures == 0;
  result.detail = std::to_string(failures) + " of 10000 pairs above the envelope";
  return result;
}

CheckResult check_r_bounds(const ValidationOptions& options) {
  CheckResult result{"r_bounds_oracle", true, ""};
  Rng rng = make_stream(options.seed, 8);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int p = 2 + static_cast<int>(uniform01(rng) * 5.0);
    const Eigen::MatrixXd r = random_correlation(p, rng);
    const int i = static_cast<int>(uniform01(rng) * p);
    int j = static_cast<int>(uniform01(rng) * (p - 1));
    if (j >= i) ++j;
    const RBounds fitted = r_bounds(r, i, j);

    Eigen::MatrixXd work = r;
    auto pd_at = [&](double v) {
      work(i, j) = work(j, i) = v;
      return min_eigen_positive(work);
    };
    // Scan for the PD run containing the current value, then bisect each edge.
    constexpr int kGrid = 4000;
    const double step = 2.0 / kGrid;
    const double current = r(i, j);
    double lo_in = current;
    while (lo_in - step > -1.0 && pd_at(lo_in - step)) lo_in -= step;
    double hi_in = current;
    while (hi_in + step < 1.0 && pd_at(hi_in + step)) hi_in += step;
    auto bisect = [&](double inside, double outside) {
      for (int k = 0; k < 60; ++k) {
        const double mid = 0.5 * (inside + outside);
        (pd_at(mid) ? inside : outside) = mid;
      }
      return 0.5 * (inside + outside);
    };
    const double lo = bisect(lo_in, std::max(-1.0, lo_in - step));
    const double hi = bisect(hi_in, std::min(1.0, hi_in + step));
    worst = std::max({worst, std::abs(lo - fitted.lower), std::abs(hi - fitted.upper)});
  }
  result.passed = worst <= 1e-6;
  std::ostringstream detail;
  detail << "max bound discrepancy = " << worst;
  result.detail = detail.str();
  return result;
}

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  return {check_factory_frequencies(options), check_geometric_loops(options),
          check_beta_one_reduction(options),  check_detailed_balance(options),
          check_orderings(options),           check_envelope(options),
          check_r_bounds(options)};
}

bool report_validation(const std::vector<CheckResult>& results, std::ostream& out) {
  bool all = true;
  for (const auto& r : results) {
    out << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << "\n";
    all = all && r.passed;
  }
  out << (all ? "all checks passed" : "validation FAILED") << "\n";
  return all;
}

}  // namespace portkey::harness
