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

#include "portkey/special.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include <boost/math/special_functions/erf.hpp>

namespace portkey {

namespace {

// log(1 - Phi(z)) for z >= 0.
double log_upper_tail(double z) {
  if (z < 30.0) return std::log(0.5 * std::erfc(z / std::numbers::sqrt2));
  // Mills ratio expansion; erfc underflows beyond this point.
  const double z2 = z * z;
  const double series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
  return -0.5 * z2 - std::log(z) - 0.5 * std::log(2.0 * std::numbers::pi) + std::log(series);
}

// Inverse of the standard normal CDF.
double normal_quantile(double p) {
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

}  // namespace

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double log_normal_interval(double a, double b) {
  if (!(a < b)) throw std::domain_error("log_normal_interval requires a < b");
  if (a >= 0.0) {
    // Both in the upper tail: Q(a) - Q(b) = Q(a) (1 - Q(b) / Q(a)).
    const double la = log_upper_tail(a);
    const double lb = std::isinf(b) ? -INFINITY : log_upper_tail(b);
    return la + std::log1p(-std::exp(lb - la));
  }
  if (b <= 0.0) return log_normal_interval(-b, -a);
  return std::log(normal_cdf(b) - normal_cdf(a));
}

TruncatedNormal::TruncatedNormal(double mean, double sd, double lower, double upper)
    : mean_(mean), sd_(sd), lower_(lower), upper_(upper) {
  if (!(sd > 0.0) || !(lower < upper)) {
    throw std::domain_error("truncated normal requires sd > 0 and lower < upper");
  }
  double a = (lower - mean) / sd;
  double b = (upper - mean) / sd;
  // Work in the left tail, where the CDF has full relative precision.
  mirrored_ = a > 0.0;
  if (mirrored_) {
    std::swap(a, b);
    a = -a;
    b = -b;
  }
  cdf_lo_ = normal_cdf(a);
  cdf_hi_ = normal_cdf(b);
}

double TruncatedNormal::operator()(Rng& rng) const {
  const double u = uniform01(rng);
  double z = 0.0;
  if (cdf_hi_ > cdf_lo_) {
    const double p = cdf_lo_ + u * (cdf_hi_ - cdf_lo_);
    z = normal_quantile(std::max(p, std::numeric_limits<double>::min()));
  } else {
    // Entire interval beyond the representable CDF; the truncated law is
    // then an exponential with rate |edge| next to the edge closest to the mean.
    const double a = mirrored_ ? -(upper_ - mean_) / sd_ : (lower_ - mean_) / sd_;
    const double b = mirrored_ ? -(lower_ - mean_) / sd_ : (upper_ - mean_) / sd_;
    const double rate = std::abs(b);
    const double width = b - a;
    z = b + std::log1p(-u * -std::expm1(-rate * width)) / rate;
  }
  const double lo = mirrored_ ? -(upper_ - mean_) / sd_ : (lower_ - mean_) / sd_;
  const double hi = mirrored_ ? -(lower_ - mean_) / sd_ : (upper_ - mean_) / sd_;
  z = std::clamp(z, lo, hi);
  if (mirrored_) z = -z;
  return mean_ + sd_ * z;
}

}  // namespace portkey
