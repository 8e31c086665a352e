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

#include "portkey/models/correlation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "portkey/errors.hpp"

namespace portkey {

bool is_positive_definite(const Eigen::MatrixXd& m) {
  const Eigen::Index n = m.rows();
  if (m.cols() != n) return false;
  Eigen::MatrixXd l = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    double d = m(j, j);
    for (Eigen::Index k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (!(d > kPivotTolerance)) return false;
    l(j, j) = std::sqrt(d);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (Eigen::Index k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return true;
}

RBounds r_bounds(const Eigen::MatrixXd& r, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= r.rows() || j >= r.rows()) {
    throw std::invalid_argument("r_bounds requires distinct valid indices");
  }
  Eigen::MatrixXd work = r;
  auto det_at = [&](double value) {
    work(i, j) = value;
    work(j, i) = value;
    return work.partialPivLu().determinant();
  };
  const double at_minus = det_at(-1.0);
  const double at_zero = det_at(0.0);
  const double at_plus = det_at(1.0);
  const double a = 0.5 * (at_plus + at_minus) - at_zero;
  const double b = 0.5 * (at_plus - at_minus);
  const double c = at_zero;
  if (a >= -1e-12) {
    throw NumericalDegeneracy("det(R) is not strictly concave in r_ij; R is near singular");
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) throw NumericalDegeneracy("no positive-definite range for r_ij");
  const double root = std::sqrt(disc);
  // a < 0, so (-b + root) / (2a) is the smaller root.
  const double lo = (-b + root) / (2.0 * a);
  const double hi = (-b - root) / (2.0 * a);
  const RBounds out{std::max(-1.0, lo), std::min(1.0, hi)};
  if (!(out.upper - out.lower > 1e-12)) {
    throw NumericalDegeneracy("positive-definite range for r_ij is empty");
  }
  return out;
}

PdCoin::PdCoin(double mu, double sigma2, int p)
    : entry_(mu, std::sqrt(sigma2), -1.0, 1.0), p_(p) {
  if (p < 2) throw std::invalid_argument("pd coin requires p >= 2");
}

bool PdCoin::operator()(Rng& rng) const {
  Eigen::MatrixXd z = Eigen::MatrixXd::Identity(p_, p_);
  for (int i = 0; i < p_; ++i) {
    for (int j = i + 1; j < p_; ++j) {
      z(i, j) = entry_(rng);
      z(j, i) = z(i, j);
    }
  }
  return is_positive_definite(z);
}

bool pd_coin(double mu, double sigma2, int p, Rng& rng) { return PdCoin(mu, sigma2, p)(rng); }

double sum_sq_dev(const Eigen::MatrixXd& r, double mu) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < r.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < r.cols(); ++j) s += (r(i, j) - mu) * (r(i, j) - mu);
  }
  return s;
}

namespace {

double log_cube_mass(double mu, double sigma2, int l) {
  const double sigma = std::sqrt(sigma2);
  return l * log_normal_interval((-1.0 - mu) / sigma, (1.0 - mu) / sigma);
}

}  // namespace

double log_mu_tilde_bound(double mu, double sigma2, const Eigen::MatrixXd& r, double tau2) {
  if (!(sigma2 > 0.0)) throw std::domain_error("sigma2 must be positive");
  const int l = n_correlations(static_cast<int>(r.rows()));
  const double log_g = -sum_sq_dev(r, mu) / (2.0 * sigma2) - mu * mu / (2.0 * tau2);
  return -log_g + log_cube_mass(mu, sigma2, l);
}

double mu_tilde_bound(double mu, double sigma2, const Eigen::MatrixXd& r, double tau2) {
  return std::exp(log_mu_tilde_bound(mu, sigma2, r, tau2));
}

double log_sigma2_tilde_bound(double mu, double sigma2, const Eigen::MatrixXd& r, double a0,
                              double b0) {
  if (!(sigma2 > 0.0)) throw std::domain_error("sigma2 must be positive");
  const int l = n_correlations(static_cast<int>(r.rows()));
  const double log_g = -sum_sq_dev(r, mu) / (2.0 * sigma2) -
                       (a0 + 0.5 * l + 1.0) * std::log(sigma2) - b0 / sigma2;
  return -log_g + log_cube_mass(mu, sigma2, l);
}

CorrelationModel::CorrelationModel(const Eigen::MatrixXd& data, CorrelationPriors priors,
                                   CorrelationTuning tuning, CorrelationState initial)
    : p_(static_cast<int>(data.cols())),
      n_obs_(static_cast<double>(data.rows())),
      scatter_(data.transpose() * data),
      priors_(priors),
      tuning_(tuning) {
  if (p_ < 2) throw std::invalid_argument("correlation model requires p >= 2 columns");
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string("correlation.") + name + " must be positive");
    }
  };
  positive(priors_.tau2, "tau2");
  positive(priors_.a0, "a0");
  positive(priors_.b0, "b0");
  positive(tuning_.proposal_sd_r, "proposal_sd_r");
  positive(tuning_.proposal_sd_mu, "proposal_sd_mu");
  positive(tuning_.proposal_sd_sigma2, "proposal_sd_sigma2");
  static_cast<void>(PortkeyBeta(tuning_.beta_mu));
  static_cast<void>(PortkeyBeta(tuning_.beta_sigma2));
  if (tuning_.kernel != KernelKind::flipped_portkey && tuning_.kernel != KernelKind::two_coin) {
    throw std::invalid_argument("correlation model supports flipped_portkey or two_coin kernels");
  }
  set_state(std::move(initial));
}

CorrelationState CorrelationModel::default_initial_state(int p) {
  return {Eigen::MatrixXd::Identity(p, p), 0.0, 0.1};
}

void CorrelationModel::set_state(CorrelationState state) {
  const auto& r = state.r;
  if (r.rows() != p_ || r.cols() != p_) throw std::invalid_argument("R has the wrong dimension");
  if (!r.isApprox(r.transpose(), 0.0) || (r.diagonal().array() != 1.0).any()) {
    throw std::invalid_argument("R must be symmetric with unit diagonal");
  }
  if (!is_positive_definite(r)) throw std::invalid_argument("R must be positive definite");
  if (!(state.sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be positive");
  state_ = std::move(state);
}

double CorrelationModel::log_r_conditional(const Eigen::MatrixXd& r) const {
  Eigen::LLT<Eigen::MatrixXd> llt(r);
  if (llt.info() != Eigen::Success) throw NumericalDegeneracy("Cholesky failed on R");
  const Eigen::MatrixXd lm = llt.matrixL();
  const double log_det = 2.0 * lm.diagonal().array().log().sum();
  const double trace = n_obs_ > 0.0 ? llt.solve(scatter_).trace() : 0.0;
  return -0.5 * n_obs_ * log_det - 0.5 * trace - sum_sq_dev(r, state_.mu) / (2.0 * state_.sigma2);
}

bool CorrelationModel::r_update(int i, int j, Rng& rng) {
  if (i > j) std::swap(i, j);
  const RBounds bounds = r_bounds(state_.r, i, j);
  const double proposed = state_.r(i, j) + tuning_.proposal_sd_r * standard_normal(rng);
  if (!(proposed > bounds.lower && proposed < bounds.upper)) return false;
  Eigen::MatrixXd candidate = state_.r;
  candidate(i, j) = proposed;
  candidate(j, i) = proposed;
  if (!is_positive_definite(candidate)) return false;
  const double log_ratio = log_r_conditional(candidate) - log_r_conditional(state_.r);
  if (std::log(uniform01(rng)) < log_ratio) {
    state_.r = std::move(candidate);
    return true;
  }
  return false;
}

WeightedCoin CorrelationModel::mu_coin(double mu) const {
  return WeightedCoin::from_log_bound(log_mu_tilde_bound(mu, state_.sigma2, state_.r, priors_.tau2),
                                      PCoin(PdCoin(mu, state_.sigma2, p_)));
}

WeightedCoin CorrelationModel::sigma2_coin(double sigma2) const {
  return WeightedCoin::from_log_bound(
      log_sigma2_tilde_bound(state_.mu, sigma2, state_.r, priors_.a0, priors_.b0),
      PCoin(PdCoin(state_.mu, sigma2, p_)));
}

FactoryOutcome CorrelationModel::run_flipped(const WeightedCoin& current,
                                             const WeightedCoin& proposed, double beta,
                                             Rng& rng) const {
  const PortkeyBeta gate =
      tuning_.kernel == KernelKind::two_coin ? PortkeyBeta::one() : PortkeyBeta(beta);
  return flipped_portkey_two_coin(current, proposed, gate, rng, tuning_.max_loops);
}

ComponentOutcome CorrelationModel::mu_update(Rng& rng) {
  const double proposed = state_.mu + tuning_.proposal_sd_mu * standard_normal(rng);
  const auto outcome = run_flipped(mu_coin(state_.mu), mu_coin(proposed), tuning_.beta_mu, rng);
  if (outcome.accepted) state_.mu = proposed;
  return {outcome.accepted, outcome.loops};
}

ComponentOutcome CorrelationModel::sigma2_update(Rng& rng) {
  const double proposed = state_.sigma2 + tuning_.proposal_sd_sigma2 * standard_normal(rng);
  if (!(proposed > 0.0)) return {false, 0};
  const auto outcome =
      run_flipped(sigma2_coin(state_.sigma2), sigma2_coin(proposed), tuning_.beta_sigma2, rng);
  if (outcome.accepted) state_.sigma2 = proposed;
  return {outcome.accepted, outcome.loops};
}

SweepOutcome CorrelationModel::gibbs_sweep(Rng& rng) {
  SweepOutcome out;
  for (int i = 0; i < p_; ++i) {
    for (int j = i + 1; j < p_; ++j) out.r_accepted += r_update(i, j, rng) ? 1 : 0;
  }
  out.mu = mu_update(rng);
  out.sigma2 = sigma2_update(rng);
  return out;
}

Eigen::MatrixXd synth_data(int n, const Eigen::MatrixXd& true_r, Rng& rng) {
  const auto p = true_r.rows();
  if (p < 2 || true_r.cols() != p) {
    throw std::invalid_argument("synthetic data requires a square matrix with p >= 2");
  }
  if (n < 0) throw std::invalid_argument("n must be nonnegative");
  if (!is_positive_definite(true_r)) throw std::invalid_argument("true R is not positive definite");
  const Eigen::MatrixXd l = Eigen::LLT<Eigen::MatrixXd>(true_r).matrixL();
  Eigen::MatrixXd data(n, p);
  Eigen::VectorXd z(p);
  for (int row = 0; row < n; ++row) {
    for (Eigen::Index k = 0; k < p; ++k) z(k) = standard_normal(rng);
    data.row(row) = (l * z).transpose();
  }
  return data;
}

Eigen::MatrixXd equicorrelation(int p, double rho) {
  Eigen::MatrixXd r = Eigen::MatrixXd::Constant(p, p, rho);
  r.diagonal().setOnes();
  return r;
}

Eigen::MatrixXd sample_correlation(const Eigen::MatrixXd& data) {
  if (data.rows() < 1) throw std::invalid_argument("sample correlation needs at least one row");
  const Eigen::MatrixXd s = data.transpose() * data;
  const Eigen::VectorXd scale = s.diagonal().cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd r = scale.asDiagonal() * s * scale.asDiagonal();
  r = (0.5 * (r + r.transpose())).eval();
  r.diagonal().setOnes();
  return r;
}

}  // namespace portkey
