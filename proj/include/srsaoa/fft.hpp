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

#ifndef srsaoa_fft_H
#define srsaoa_fft_H

#include "srsaoa/common.hpp"

namespace srsaoa
{

inline bool is_power_of_two(size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline size_t next_pow2(size_t n)
{
    size_t p = 1;
    while (p < n)
        p <<= 1;
    return p;
}

namespace detail
{
// Iterative radix-2 Cooley-Tukey, in place, no scaling.
inline void fft_radix2(cvec &x, bool inverse)
{
    const size_t n = x.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft: length must be a power of two");

    // bit-reversal permutation
    for (size_t i = 1, j = 0; i < n; ++i)
    {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1)
            j ^= bit;
        j ^= bit;
        if (i < j)
            std::swap(x[i], x[j]);
    }

    for (size_t len = 2; len <= n; len <<= 1)
    {
        const double ang = (inverse ? 2.0 : -2.0) * pi / static_cast<double>(len);
        const cpx wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len)
        {
            cpx w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k)
            {
                const cpx u = x[i + k];
                const cpx v = x[i + k + len / 2] * w;
                x[i + k] = u + v;
                x[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}
} // namespace detail

// Unitary transforms: both directions carry 1/sqrt(N) so energy is preserved.
inline void fft_unitary(cvec &x)
{
    detail::fft_radix2(x, false);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto &v : x)
        v *= s;
}

inline void ifft_unitary(cvec &x)
{
    detail::fft_radix2(x, true);
    const double s = 1.0 / std::sqrt(static_cast<double>(x.size()));
    for (auto &v : x)
        v *= s;
}

// Non-normalized forward / 1/N inverse pair, used for fast convolution where
// unitary scaling would just cancel out.
inline void fft_raw(cvec &x) { detail::fft_radix2(x, false); }

inline void ifft_raw(cvec &x)
{
    detail::fft_radix2(x, true);
    const double s = 1.0 / static_cast<double>(x.size());
    for (auto &v : x)
        v *= s;
}

} // namespace srsaoa

#endif
