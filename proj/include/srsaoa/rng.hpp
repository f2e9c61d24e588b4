// SPDX-License-Identifier: Apache-2.0
//
// srsaoa - 5G NR SRS uplink angle-of-arrival simulation laboratory
// Copyright (C) 2026 srsaoa contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef srsaoa_rng_H
#define srsaoa_rng_H

#include <random>

#include "srsaoa/common.hpp"

namespace srsaoa
{

// Integer mixer used to derive independent sub-seeds from (seed, index, ...)
// tuples. Trial seeds are index-addressed so execution order never matters.
inline uint64_t splitmix64(uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b = 0, uint64_t c = 0)
{
    uint64_t h = splitmix64(seed ^ 0x243f6a8885a308d3ULL);
    h = splitmix64(h ^ a);
    h = splitmix64(h ^ b);
    h = splitmix64(h ^ c);
    return h;
}

// Deterministic random stream. Gaussian samples are produced with an explicit
// Box-Muller transform so sequences do not depend on the standard library's
// distribution internals.
class rng_stream
{
  public:
    explicit rng_stream(uint64_t seed) : gen(seed) {}

    double uniform() // (0, 1]
    {
        const uint64_t r = gen();
        return (static_cast<double>(r >> 11) + 1.0) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    uint64_t integer(uint64_t n) // [0, n)
    {
        return gen() % n;
    }

    // Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    cpx complex_normal(double variance)
    {
        const double r = std::sqrt(-variance * std::log(uniform()));
        const double phi = 2.0 * pi * uniform();
        return cpx(r * std::cos(phi), r * std::sin(phi));
    }

    double normal(double stddev)
    {
        const double r = std::sqrt(-2.0 * std::log(uniform()));
        return stddev * r * std::cos(2.0 * pi * uniform());
    }

  private:
    std::mt19937_64 gen;
};

} // namespace srsaoa

#endif
