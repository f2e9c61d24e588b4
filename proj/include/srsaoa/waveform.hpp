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

#ifndef srsaoa_waveform_H
#define srsaoa_waveform_H

#include <numeric>
#include <string>

#include "srsaoa/fft.hpp"
#include "srsaoa/linalg.hpp"

namespace srsaoa
{

// One uplink waveform configuration: numerology, grid geometry and the
// comb-2 SRS occupancy of the first four symbols of every slot.
struct waveform_config
{
    std::string id;             // "I" .. "VIII"
    int numerology_mu = 1;      // 1 or 2
    double subcarrier_spacing = 30e3;
    double bandwidth = 20e6;
    double carrier_freq = 2.4e9;
    int n_resource_blocks = 0;
    int n_subcarriers = 0;      // 12 * n_resource_blocks
    int fft_size = 0;
    double sample_rate = 0.0;   // subcarrier_spacing * fft_size
    std::vector<int> cp_lengths; // per symbol, one slot
    int symbols_per_slot = 14;
    int srs_symbols = 4;
    int comb_spacing = 2;
    int srs_symbol_start = 0;

    int pilot_count() const { return n_subcarriers / comb_spacing; }

    int slot_samples() const
    {
        int total = 0;
        for (int cp : cp_lengths)
            total += cp + fft_size;
        return total;
    }

    double slot_duration() const { return 1e-3 / static_cast<double>(1 << numerology_mu); }
};

namespace detail
{
inline waveform_config make_config(const std::string &id, int mu, double scs, double bw,
                                   double fc, int n_rb, int fft)
{
    waveform_config c;
    c.id = id;
    c.numerology_mu = mu;
    c.subcarrier_spacing = scs;
    c.bandwidth = bw;
    c.carrier_freq = fc;
    c.n_resource_blocks = n_rb;
    c.n_subcarriers = 12 * n_rb;
    c.fft_size = fft;
    c.sample_rate = scs * fft;

    // Normal cyclic prefix: base length scales with the FFT size, the first
    // symbol of the slot absorbs the remainder so the slot duration is exact.
    const int slot_samples = static_cast<int>(std::lround(c.sample_rate * c.slot_duration()));
    const int total_cp = slot_samples - 14 * fft;
    const int base_cp = 144 * fft / 2048;
    const int first_cp = total_cp - 13 * base_cp;
    if (first_cp < base_cp)
        throw std::logic_error("waveform_config: inconsistent cyclic prefix budget");
    c.cp_lengths.assign(14, base_cp);
    c.cp_lengths[0] = first_cp;
    return c;
}
} // namespace detail

// Supported configurations. Grid sizes follow the standard numerology rule
// sample_rate = subcarrier_spacing * fft_size with the usual transmission
// bandwidth tables (20 MHz @ 30 kHz -> 51 RB, 50 MHz @ 30 kHz -> 133 RB,
// 20 MHz @ 60 kHz -> 24 RB, 50 MHz @ 60 kHz -> 64 RB).
inline waveform_config make_waveform_config(const std::string &id)
{
    if (id == "I")
        return detail::make_config("I", 1, 30e3, 20e6, 2.4e9, 51, 1024);
    if (id == "II")
        return detail::make_config("II", 1, 30e3, 50e6, 2.4e9, 133, 2048);
    if (id == "III")
        return detail::make_config("III", 1, 30e3, 20e6, 3.5e9, 51, 1024);
    if (id == "IV")
        return detail::make_config("IV", 1, 30e3, 50e6, 3.5e9, 133, 2048);
    if (id == "V")
        return detail::make_config("V", 2, 60e3, 20e6, 3.5e9, 24, 512);
    if (id == "VI")
        return detail::make_config("VI", 2, 60e3, 50e6, 3.5e9, 64, 1024);
    if (id == "VII")
        return detail::make_config("VII", 2, 60e3, 20e6, 5.8e9, 24, 512);
    if (id == "VIII")
        return detail::make_config("VIII", 2, 60e3, 50e6, 5.8e9, 64, 1024);
    throw std::invalid_argument("unknown waveform configuration id: " + id);
}

// Complex values over one slot: symbols_per_slot x n_subcarriers.
using resource_grid = cmatrix;

struct baseband_signal
{
    cvec samples;
    double sample_rate = 0.0;
};

inline bool is_prime(int n)
{
    if (n < 2)
        return false;
    for (int i = 2; i * i <= n; ++i)
        if (n % i == 0)
            return false;
    return true;
}

inline int largest_prime_leq(int n)
{
    while (n >= 2 && !is_prime(n))
        --n;
    return n;
}

// Low-PAPR pilot sequence: Zadoff-Chu of the largest prime length <= pilot
// count, cyclically extended, with configurable root and cyclic shift.
inline cvec generate_srs_sequence(const waveform_config &cfg, int root_index,
                                  double cyclic_shift)
{
    const int len = cfg.pilot_count();
    if (len < 6)
        throw std::invalid_argument("generate_srs_sequence: pilot sequence length too small");
    const int n_zc = largest_prime_leq(len);
    if (root_index <= 0 || root_index >= n_zc || std::gcd(root_index, n_zc) != 1)
        throw std::invalid_argument("generate_srs_sequence: root index not coprime with "
                                    "sequence length " + std::to_string(n_zc));

    cvec seq(len);
    for (int n = 0; n < len; ++n)
    {
        const int m = n % n_zc;
        // exponent in units of pi: q * m * (m + 1) / n_zc (kept exact via fmod)
        const double frac = std::fmod(static_cast<double>(root_index) * m * (m + 1),
                                      2.0 * n_zc);
        const double phase = -pi * frac / n_zc + cyclic_shift * n;
        seq[n] = cpx(std::cos(phase), std::sin(phase));
    }
    return seq;
}

// Place pilots on every comb_spacing-th subcarrier of the SRS symbols.
inline resource_grid map_to_grid(const cvec &pilots, const waveform_config &cfg)
{
    if (static_cast<int>(pilots.size()) != cfg.pilot_count())
        throw std::invalid_argument("map_to_grid: pilot length does not match comb occupancy");

    resource_grid grid(cfg.symbols_per_slot, cfg.n_subcarriers);
    for (int sym = cfg.srs_symbol_start; sym < cfg.srs_symbol_start + cfg.srs_symbols; ++sym)
        for (int k = 0; k < cfg.pilot_count(); ++k)
            grid(sym, static_cast<size_t>(k) * cfg.comb_spacing) = pilots[k];
    return grid;
}

namespace detail
{
// DC-centered mapping: grid column k sits at FFT bin (k - n_subcarriers/2) mod fft.
inline size_t grid_col_to_bin(int k, const waveform_config &cfg)
{
    int f = k - cfg.n_subcarriers / 2;
    if (f < 0)
        f += cfg.fft_size;
    return static_cast<size_t>(f);
}
} // namespace detail

// Unitary OFDM modulation: per symbol, inverse transform of the centered
// subcarrier mapping with the cyclic prefix prepended.
inline baseband_signal ofdm_modulate(const resource_grid &grid, const waveform_config &cfg)
{
    if (grid.rows != static_cast<size_t>(cfg.symbols_per_slot) ||
        grid.cols != static_cast<size_t>(cfg.n_subcarriers))
        throw std::invalid_argument("ofdm_modulate: grid dimensions do not match configuration");

    baseband_signal sig;
    sig.sample_rate = cfg.sample_rate;
    sig.samples.reserve(cfg.slot_samples());

    cvec body(cfg.fft_size);
    for (int sym = 0; sym < cfg.symbols_per_slot; ++sym)
    {
        std::fill(body.begin(), body.end(), cpx(0.0, 0.0));
        for (int k = 0; k < cfg.n_subcarriers; ++k)
            body[detail::grid_col_to_bin(k, cfg)] = grid(sym, k);
        ifft_unitary(body);

        const int cp = cfg.cp_lengths[sym];
        sig.samples.insert(sig.samples.end(), body.end() - cp, body.end());
        sig.samples.insert(sig.samples.end(), body.begin(), body.end());
    }
    return sig;
}

// Exact inverse of ofdm_modulate on clean input, starting at start_offset.
inline resource_grid ofdm_demodulate(const baseband_signal &sig, const waveform_config &cfg,
                                     size_t start_offset)
{
    if (start_offset + static_cast<size_t>(cfg.slot_samples()) > sig.samples.size())
        throw std::invalid_argument("ofdm_demodulate: not enough samples after offset");

    resource_grid grid(cfg.symbols_per_slot, cfg.n_subcarriers);
    cvec body(cfg.fft_size);
    size_t pos = start_offset;
    for (int sym = 0; sym < cfg.symbols_per_slot; ++sym)
    {
        pos += cfg.cp_lengths[sym];
        std::copy(sig.samples.begin() + pos, sig.samples.begin() + pos + cfg.fft_size,
                  body.begin());
        fft_unitary(body);
        for (int k = 0; k < cfg.n_subcarriers; ++k)
            grid(sym, k) = body[detail::grid_col_to_bin(k, cfg)];
        pos += cfg.fft_size;
    }
    return grid;
}

// Occupied-comb entries of the SRS symbols: srs_symbols x pilot_count.
inline cmatrix extract_srs_symbols(const resource_grid &grid, const waveform_config &cfg)
{
    if (grid.rows < static_cast<size_t>(cfg.srs_symbol_start + cfg.srs_symbols))
        throw std::invalid_argument("extract_srs_symbols: grid has too few symbols");

    cmatrix out(cfg.srs_symbols, cfg.pilot_count());
    for (int s = 0; s < cfg.srs_symbols; ++s)
        for (int k = 0; k < cfg.pilot_count(); ++k)
            out(s, k) = grid(cfg.srs_symbol_start + s, static_cast<size_t>(k) * cfg.comb_spacing);
    return out;
}

// Clean one-slot SRS waveform (pilots on symbols 0-3, zeros elsewhere); also
// the stored reference the receiver correlates against.
inline baseband_signal make_reference_slot(const waveform_config &cfg, int root_index = 25,
                                           double cyclic_shift = 0.0)
{
    return ofdm_modulate(map_to_grid(generate_srs_sequence(cfg, root_index, cyclic_shift), cfg),
                         cfg);
}

} // namespace srsaoa

#endif
