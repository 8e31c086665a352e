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

#ifndef PORTKEY_MODELS_CORRELATION_HPP
#define PORTKEY_MODELS_CORRELATION_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "portkey/factory.hpp"
#include "portkey/kernel.hpp"
#include "portkey/rng.hpp"
#include "portkey/special.hpp"

/**
 * \file
 * \brief Common-correlation model with a positive-definite constrained prior.
 *
 * y_1..y_n ~ N(0, R) iid, r_ij ~ N(mu, sigma2) for i < j restricted to
 * positive-definite R, mu ~ N(0, tau2), sigma2 ~ IG(a0, b0). The prior's
 * normalising constant L(mu, sigma2) has no closed form, so mu and sigma2
 * are updated with the flipped portkey factory; each r_ij gets a plain
 * Metropolis step because L cancels in its full conditional.
 */

namespace portkey {

/// Pivot threshold for the positive-definiteness test.
inline constexpr double kPivotTolerance = 1e-12;

/// Cholesky-based test: every pivot must exceed kPivotTolerance.
bool is_positive_definite(const Eigen::MatrixXd& m);

/// Number of free correlations, p (p - 1) / 2.
inline int n_correlations(int p) { return p * (p - 1) / 2; }

struct RBounds {
  double lower = -1.0;
  double upper = 1.0;
};

/// Interval of r_ij values keeping R positive definite with all other entries
/// fixed. det(R) is quadratic in r_ij; it is fitted exactly from its values
/// at -1, 0 and 1 and its roots are clipped to [-1, 1].
/// Throws NumericalDegeneracy if the leading coefficient is >= -1e-12 or the
/// range is empty.
RBounds r_bounds(const Eigen::MatrixXd& r, int i, int j);

/// Coin with success probability equal to the chance that a symmetric
/// unit-diagonal matrix with iid TN(-1, 1, mu, sigma2) off-diagonal entries
/// is positive definite.
class PdCoin {
 public:
  PdCoin(double mu, double sigma2, int p);
  bool operator()(Rng& rng) const;

 private:
  TruncatedNormal entry_;
  int p_;
};

/// One draw of the PdCoin above.
bool pd_coin(double mu, double sigma2, int p, Rng& rng);

/// Sum over i < j of (r_ij - mu)^2.
double sum_sq_dev(const Eigen::MatrixXd& r, double mu);

/// log of the flipped-factory bound for mu:
/// -log g(mu, R, sigma2) + l log[Phi((1 - mu) / sigma) - Phi((-1 - mu) / sigma)]
/// with log g = -sum_sq_dev / (2 sigma2) - mu^2 / (2 tau2).
double log_mu_tilde_bound(double mu, double sigma2, const Eigen::MatrixXd& r, double tau2);

/// exp of the above. May overflow to infinity; prefer the log form.
double mu_tilde_bound(double mu, double sigma2, const Eigen::MatrixXd& r, double tau2);

/// Same construction for sigma2, with
/// log g = -sum_sq_dev / (2 sigma2) - (a0 + l / 2 + 1) log sigma2 - b0 / sigma2.
double log_sigma2_tilde_bound(double mu, double sigma2, const Eigen::MatrixXd& r, double a0,
                              double b0);

struct CorrelationPriors {
  double tau2 = 1.0;
  double a0 = 3.0;
  double b0 = 0.5;

  friend bool operator==(const CorrelationPriors&, const CorrelationPriors&) = default;
};

struct CorrelationTuning {
  double proposal_sd_r = 0.02;
  double proposal_sd_mu = 0.35;
  double proposal_sd_sigma2 = 0.1;
  double beta_mu = 0.9;
  double beta_sigma2 = 0.9;
  /// flipped_portkey runs the gated factory; two_coin runs the same factory
  /// with the gate removed (plain Barker acceptance).
  KernelKind kernel = KernelKind::flipped_portkey;
  std::uint64_t max_loops = kDefaultMaxLoops;
};

struct CorrelationState {
  Eigen::MatrixXd r;
  double mu = 0.0;
  double sigma2 = 0.1;
};

struct ComponentOutcome {
  bool accepted = false;
  std::uint64_t loops = 0;  ///< 0 when no factory ran
};

struct SweepOutcome {
  int r_accepted = 0;
  ComponentOutcome mu;
  ComponentOutcome sigma2;
};

class CorrelationModel {
 public:
  /// `data` is n x p (n may be 0). Throws std::invalid_argument on bad
  /// hyperparameters, tuning, or an initial state that is not a valid
  /// p x p correlation matrix.
  CorrelationModel(const Eigen::MatrixXd& data, CorrelationPriors priors, CorrelationTuning tuning,
                   CorrelationState initial);

  /// R = I, mu = 0, sigma2 = 0.1.
  static CorrelationState default_initial_state(int p);

  int dimension() const noexcept { return p_; }
  int n_correlations() const noexcept { return portkey::n_correlations(p_); }
  const CorrelationState& state() const noexcept { return state_; }
  const CorrelationPriors& priors() const noexcept { return priors_; }
  const CorrelationTuning& tuning() const noexcept { return tuning_; }
  void set_state(CorrelationState state);

  /// log f(r_ij | r_-ij, mu, sigma2) up to a constant, at matrix `r`.
  double log_r_conditional(const Eigen::MatrixXd& r) const;

  /// Metropolis step on r_ij (i != j, order irrelevant). Returns acceptance.
  bool r_update(int i, int j, Rng& rng);

  /// Flipped weighted coins for the mu and sigma2 full conditionals at the
  /// current R (and sigma2 or mu respectively).
  WeightedCoin mu_coin(double mu) const;
  WeightedCoin sigma2_coin(double sigma2) const;

  ComponentOutcome mu_update(Rng& rng);
  ComponentOutcome sigma2_update(Rng& rng);

  /// All r_ij (i < j, row-major), then mu, then sigma2.
  SweepOutcome gibbs_sweep(Rng& rng);

 private:
  FactoryOutcome run_flipped(const WeightedCoin& current, const WeightedCoin& proposed, double beta,
                             Rng& rng) const;

  int p_;
  double n_obs_;
  Eigen::MatrixXd scatter_;  // Y^T Y
  CorrelationPriors priors_;
  CorrelationTuning tuning_;
  CorrelationState state_;
};

/// n rows of N_p(0, true_r) via the Cholesky factor. Requires p >= 2 and a
/// positive definite true_r.
Eigen::MatrixXd synth_data(int n, const Eigen::MatrixXd& true_r, Rng& rng);

/// Equicorrelation matrix with off-diagonal rho.
Eigen::MatrixXd equicorrelation(int p, double rho);

/// Y^T Y scaled to unit diagonal (the data are taken as mean zero).
Eigen::MatrixXd sample_correlation(const Eigen::MatrixXd& data);

}  // namespace portkey

#endif  // PORTKEY_MODELS_CORRELATION_HPP
