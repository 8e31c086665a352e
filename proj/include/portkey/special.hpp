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

#ifndef PORTKEY_SPECIAL_HPP
#define PORTKEY_SPECIAL_HPP

#include "portkey/rng.hpp"

namespace portkey {

/// Standard normal CDF.
double normal_cdf(double z);

/// log(Phi(b) - Phi(a)) for a < b, accurate far into either tail.
double log_normal_interval(double a, double b);

/// Normal(mean, sd^2) restricted to (lower, upper), sampled by inverting the
/// CDF on the truncated interval. Interval endpoints in the upper tail are
/// handled through the survival function so both tails keep precision.
class TruncatedNormal {
 public:
  TruncatedNormal(double mean, double sd, double lower, double upper);

  double operator()(Rng& rng) const;

  double mean() const noexcept { return mean_; }
  double sd() const noexcept { return sd_; }
  double lower() const noexcept { return lower_; }
  double upper() const noexcept { return upper_; }

 private:
  double mean_;
  double sd_;
  double lower_;
  double upper_;
  bool mirrored_;  // sample -Z on (-upper, -lower) to stay in the left tail
  double cdf_lo_;
  double cdf_hi_;
};

}  // namespace portkey

#endif  // PORTKEY_SPECIAL_HPP
