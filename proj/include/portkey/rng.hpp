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

#ifndef PORTKEY_RNG_HPP
#define PORTKEY_RNG_HPP

#include <cstdint>
#include <random>

namespace portkey {

/// Engine used by every stochastic operation. Always passed explicitly.
using Rng = std::mt19937_64;

/// One step of the splitmix64 sequence; used to expand seeds.
std::uint64_t splitmix64(std::uint64_t& state);

/// Independent stream for `(seed, stream)`, e.g. one per replication.
/// The engine state is filled from splitmix64 so nearby seeds and stream
/// indices give unrelated streams.
Rng make_stream(std::uint64_t seed, std::uint64_t stream = 0);

/// Uniform on [0, 1) built from the top 53 bits, independent of the
/// standard library's distribution implementation.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Bernoulli(p) event; p <= 0 never fires and p >= 1 always fires.
inline bool bernoulli(Rng& rng, double p) { return uniform01(rng) < p; }

/// Standard normal draw by the polar method, for the same reason as
/// uniform01: reproducible output across standard library versions.
double standard_normal(Rng& rng);

/// Gamma(shape, rate) draw (Marsaglia-Tsang); mean shape / rate.
double gamma_draw(Rng& rng, double shape, double rate);

}  // namespace portkey

#endif  // PORTKEY_RNG_HPP
