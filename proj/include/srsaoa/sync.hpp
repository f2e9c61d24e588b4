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

#ifndef srsaoa_sync_H
#define srsaoa_sync_H

#include <algorithm>
#include <limits>

#include "srsaoa/fft.hpp"
#include "srsaoa/waveform.hpp"

namespace srsaoa
{

struct correlation_result
{
    size_t peak_index = 0;
    double peak_magnitude = 0.0;
    std::vector<double> profile; // |c(n)| for every candidate offset
};

// Matched-filter magnitude profile |sum_i conj(ref[i]) x[n+i]| for
// n in [0, len(x) - len(ref)]. Long references go through frequency-domain
// fast convolution; two-slot windows at 61.44 Msps make the direct sum
// prohibitive.
inline std::vector<double> cross_correlate(const cvec &reference, const cvec &received)
{
    const size_t lref = reference.size();
    const size_t lrx = received.size();
    if (lref == 0 || lref > lrx)
        throw std::invalid_argument("cross_correlate: reference longer than received");

    const size_t n_out = lrx - lref + 1;
    std::vector<double> out(n_out);

    if (lref <= 4096)
    {
        for (size_t n = 0; n < n_out; ++n)
        {
            cpx acc(0.0, 0.0);
            for (size_t i = 0; i < lref; ++i)
                acc += std::conj(reference[i]) * received[n + i];
            out[n] = std::abs(acc);
        }
        return out;
    }

    const size_t nfft = next_pow2(lrx);
    cvec rx(nfft, cpx(0.0, 0.0));
    cvec rf(nfft, cpx(0.0, 0.0));
    std::copy(received.begin(), received.end(), rx.begin());
    std::copy(reference.begin(), reference.end(), rf.begin());
    fft_raw(rx);
    fft_raw(rf);
    for (size_t k = 0; k < nfft; ++k)
        rx[k] *= std::conj(rf[k]);
    ifft_raw(rx);
    for (size_t n = 0; n < n_out; ++n)
        out[n] = std::abs(rx[n]);
    return out;
}

// Reusable matched filter with the reference spectrum precomputed; campaign
// trials correlate against the same slot waveform thousands of times.
class reference_correlator
{
  public:
    explicit reference_correlator(const cvec &reference) : lref(reference.size())
    {
        if (lref == 0)
            throw std::invalid_argument("reference_correlator: empty reference");
        ref_time = reference;
        ref_energy = 0.0;
        for (const auto &v : reference)
            ref_energy += std::norm(v);
    }

    std::vector<double> correlate(const cvec &received) const
    {
        if (lref > received.size())
            throw std::invalid_argument("reference_correlator: reference longer than received");
        if (lref <= 4096)
            return cross_correlate(ref_time, received);

        const size_t nfft = next_pow2(received.size());
        if (nfft != cached_nfft)
        {
            ref_spectrum.assign(nfft, cpx(0.0, 0.0));
            std::copy(ref_time.begin(), ref_time.end(), ref_spectrum.begin());
            fft_raw(ref_spectrum);
            cached_nfft = nfft;
        }
        cvec rx(nfft, cpx(0.0, 0.0));
        std::copy(received.begin(), received.end(), rx.begin());
        fft_raw(rx);
        for (size_t k = 0; k < nfft; ++k)
            rx[k] *= std::conj(ref_spectrum[k]);
        ifft_raw(rx);

        const size_t n_out = received.size() - lref + 1;
        std::vector<double> out(n_out);
        for (size_t n = 0; n < n_out; ++n)
            out[n] = std::abs(rx[n]);
        return out;
    }

    correlation_result detect(const cvec &received) const
    {
        correlation_result res;
        res.profile = correlate(received);
        res.peak_index = 0;
        res.peak_magnitude = res.profile.front();
        for (size_t n = 1; n < res.profile.size(); ++n)
        {
            if (res.profile[n] > res.peak_magnitude)
            {
                res.peak_magnitude = res.profile[n];
                res.peak_index = n;
            }
        }
        // mathematically tied peaks differ here only by transform roundoff;
        // break them toward the smallest index
        for (size_t n = 0; n < res.peak_index; ++n)
        {
            if (res.profile[n] >= res.peak_magnitude * (1.0 - 1e-9))
            {
                res.peak_index = n;
                res.peak_magnitude = res.profile[n];
                break;
            }
        }
        return res;
    }

    size_t reference_length() const { return lref; }
    double reference_energy() const { return ref_energy; }

  private:
    size_t lref;
    cvec ref_time;
    double ref_energy;
    mutable cvec ref_spectrum;
    mutable size_t cached_nfft = 0;
};

// Slot start as the argmax of the cross-correlator output; ties break toward
// the smallest index.
inline size_t detect_slot_start(const waveform_config &cfg, const baseband_signal &reference,
                                const cvec &received)
{
    if (received.size() < 2 * static_cast<size_t>(cfg.slot_samples()))
        throw std::invalid_argument("detect_slot_start: received span shorter than two slots");
    reference_correlator corr(reference.samples);
    return corr.detect(received).peak_index;
}

inline double median_of(std::vector<double> v)
{
    if (v.empty())
        throw std::invalid_argument("median_of: empty input");
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    double m = v[mid];
    if (v.size() % 2 == 0)
    {
        std::nth_element(v.begin(), v.begin() + mid - 1, v.begin() + mid);
        m = 0.5 * (m + v[mid - 1]);
    }
    return m;
}

// Comb SINR of a demodulated slot: mean power per occupied comb position
// against mean power per empty position over the SRS symbols. A slot without
// detectable signal yields -inf (flagged, not thrown); a noise-free slot is
// clamped to ceiling_db.
inline double estimate_sinr(const resource_grid &grid, const waveform_config &cfg,
                            double ceiling_db = 60.0)
{
    if (grid.rows < static_cast<size_t>(cfg.srs_symbol_start + cfg.srs_symbols) ||
        grid.cols != static_cast<size_t>(cfg.n_subcarriers))
        throw std::invalid_argument("estimate_sinr: grid does not hold a demodulated slot");

    double p_util = 0.0, p_empty = 0.0;
    size_t n_util = 0, n_empty = 0;
    for (int s = cfg.srs_symbol_start; s < cfg.srs_symbol_start + cfg.srs_symbols; ++s)
    {
        for (int k = 0; k < cfg.n_subcarriers; ++k)
        {
            const double p = std::norm(grid(s, k));
            if (k % cfg.comb_spacing == 0)
            {
                p_util += p;
                ++n_util;
            }
            else
            {
                p_empty += p;
                ++n_empty;
            }
        }
    }
    p_util /= static_cast<double>(n_util);
    p_empty /= static_cast<double>(n_empty);

    if (p_util <= p_empty)
        return -std::numeric_limits<double>::infinity();
    if (p_empty == 0.0)
        return ceiling_db;
    return std::min(ceiling_db, 10.0 * std::log10((p_util - p_empty) / p_empty));
}

// Differential phase of the common tone between two channels, computed by
// correlating each against a complex exponential at tone_freq. Result lies in
// [-pi, pi). Throws when the tone is buried: that is a calibration failure.
inline double estimate_phase_offset(const cvec &channel_a, const cvec &channel_b,
                                    double tone_freq, double sample_rate,
                                    double detection_factor = 10.0)
{
    if (channel_a.size() != channel_b.size() || channel_a.size() < 1000)
        throw std::invalid_argument("estimate_phase_offset: need matched spans of >= 1000 samples");

    const size_t n = channel_a.size();
    const double w = 2.0 * pi * tone_freq / sample_rate;

    auto tone_bin = [&](const cvec &x) {
        cpx acc(0.0, 0.0);
        double power = 0.0;
        for (size_t i = 0; i < n; ++i)
        {
            const double ph = -w * static_cast<double>(i);
            acc += x[i] * cpx(std::cos(ph), std::sin(ph));
            power += std::norm(x[i]);
        }
        // detection: the correlation peak must stand clear of what a
        // tone-free signal of the same power would produce
        const double floor_rms = std::sqrt(power);
        if (std::abs(acc) < detection_factor * floor_rms)
            throw std::runtime_error("estimate_phase_offset: tone power below threshold");
        return acc;
    };

    const cpx bin_a = tone_bin(channel_a);
    const cpx bin_b = tone_bin(channel_b);
    return wrap_to_pi(std::arg(bin_b * std::conj(bin_a)));
}

} // namespace srsaoa

#endif
