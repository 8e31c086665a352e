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


#ifndef PORTKEY_TESTS_ORACLES_HPP
#define PORTKEY_TESTS_ORACLES_HPP

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace portkey::testing {

inline double phi_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

inline double normal_pdf(double x, double mean, double sd) {
  const double z = (x - mean) / sd;
  return std::exp(-0.5 * z * z) / (sd * std::sqrt(2.0 * std::numbers::pi));
}

/// Mass of three iid N(mu, sigma2) correlations that form a positive-definite
/// 3 x 3 matrix. For fixed (r12, r13) the admissible r23 is an interval with
/// endpoints r12 r13 -+ sqrt((1 - r12^2)(1 - r13^2)); the remaining two
/// dimensions go to nested Gauss-Kronrod quadrature.
inline double pd_mass_p3(double mu, double sigma2) {
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double sd = std::sqrt(sigma2);
  auto inner = [&](double r12) {
    auto f = [&](double r13) {
      const double half = std::sqrt((1 - r12 * r12) * (1 - r13 * r13));
      const double lo = r12 * r13 - half, hi = r12 * r13 + half;
      return normal_pdf(r13, mu, sd) * (phi_cdf((hi - mu) / sd) - phi_cdf((lo - mu) / sd));
    };
    return normal_pdf(r12, mu, sd) * Quad::integrate(f, -1.0, 1.0, 10, 1e-9);
  };
  return Quad::integrate(inner, -1.0, 1.0, 10, 1e-9);
}

}  // namespace portkey::testing

#endif  // PORTKEY_TESTS_ORACLES_HPP
