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

#ifndef srsaoa_channel_H
#define srsaoa_channel_H

#include <algorithm>

#include "srsaoa/array.hpp"
#include "srsaoa/fft.hpp"
#include "srsaoa/rng.hpp"
#include "srsaoa/waveform.hpp"

namespace srsaoa
{

// Receiver-side channel roles. Channels 0..1 share the pair-A local
// oscillator, the rest pair B. One channel per pair observes the common
// reference tone: on pair A it rides on an antenna channel outside the SRS
// comb, on pair B a dedicated tap carries it.
struct channel_layout
{
    std::vector<size_t> aoa_channels = {0, 1, 2};
    std::vector<size_t> pair_b_channels = {2, 3};
    size_t reference_a = 0;
    size_t reference_b = 3;

    bool in_pair_b(size_t ch) const
    {
        return std::find(pair_b_channels.begin(), pair_b_channels.end(), ch) !=
               pair_b_channels.end();
    }
};

struct multichannel_capture
{
    std::vector<cvec> channels;
    double sample_rate = 0.0;
    channel_layout layout;

    size_t n_channels() const { return channels.size(); }

    size_t n_samples() const { return channels.empty() ? 0 : channels.front().size(); }

    void validate() const
    {
        for (const auto &ch : channels)
            if (ch.size() != n_samples())
                throw std::invalid_argument("multichannel_capture: channel lengths differ");
        std::vector<size_t> aoa = layout.aoa_channels;
        std::sort(aoa.begin(), aoa.end());
        if (std::adjacent_find(aoa.begin(), aoa.end()) != aoa.end())
            throw std::invalid_argument("multichannel_capture: duplicate layout indices");
        if (!aoa.empty() && aoa.back() >= n_channels())
            throw std::invalid_argument("multichannel_capture: layout index out of range");
    }
};

namespace detail
{
// Delay a signal by an integer number of samples plus a fractional remainder.
// The fractional part is realized as a linear phase ramp in the frequency
// domain over a padded transform, so subsample path delays stay exact in the
// band of interest.
inline cvec delay_signal(const cvec &x, double delay_samples, double sample_rate,
                         size_t out_len)
{
    const double floor_d = std::floor(delay_samples);
    const long int_delay = static_cast<long>(floor_d);
    const double frac = delay_samples - floor_d;

    cvec shifted(out_len, cpx(0.0, 0.0));
    if (frac == 0.0)
    {
        for (size_t i = 0; i < x.size(); ++i)
        {
            const long j = static_cast<long>(i) + int_delay;
            if (j >= 0 && j < static_cast<long>(out_len))
                shifted[j] = x[i];
        }
        return shifted;
    }

    const size_t nfft = next_pow2(x.size() + 512);
    cvec work(nfft, cpx(0.0, 0.0));
    std::copy(x.begin(), x.end(), work.begin());
    fft_raw(work);
    for (size_t k = 0; k < nfft; ++k)
    {
        // two-sided bin frequency in cycles per sample
        const double f = (k <= nfft / 2) ? static_cast<double>(k) / nfft
                                         : static_cast<double>(k) / nfft - 1.0;
        const double ph = -2.0 * pi * f * frac;
        work[k] *= cpx(std::cos(ph), std::sin(ph));
        (void)sample_rate;
    }
    ifft_raw(work);

    for (size_t i = 0; i < work.size(); ++i)
    {
        const long j = static_cast<long>(i) + int_delay;
        if (j >= 0 && j < static_cast<long>(out_len))
            shifted[j] = work[i];
    }
    return shifted;
}
} // namespace detail

// Superpose the delayed, steered copies of the transmit signal on every
// array element. Each path contributes gain * a(theta)[m] * s(t - tau) with
// the carrier phase term exp(-j 2 pi f_c tau) carried by the delay.
inline multichannel_capture propagate(const baseband_signal &sig,
                                      const std::vector<propagation_path> &paths,
                                      const ula_geometry &geom)
{
    if (paths.empty())
        throw std::invalid_argument("propagate: path list is empty");
    geom.validate();

    double max_delay_samples = 0.0;
    for (const auto &p : paths)
        max_delay_samples = std::max(max_delay_samples, p.delay_s * sig.sample_rate);

    const size_t out_len = sig.samples.size() + static_cast<size_t>(std::ceil(max_delay_samples));

    multichannel_capture cap;
    cap.sample_rate = sig.sample_rate;
    cap.channels.assign(geom.n_elements, cvec(out_len, cpx(0.0, 0.0)));

    for (const auto &p : paths)
    {
        const double delay_samples = p.delay_s * sig.sample_rate;
        const cvec delayed =
            detail::delay_signal(sig.samples, delay_samples, sig.sample_rate, out_len);
        const double carrier_ph = -2.0 * pi * geom.carrier_freq * p.delay_s;
        const cpx coeff = p.gain * cpx(std::cos(carrier_ph), std::sin(carrier_ph));
        const cvec a = steering_vector(geom, p.azimuth_deg);

        for (int m = 0; m < geom.n_elements; ++m)
        {
            const cpx w = coeff * a[m];
            auto &dst = cap.channels[m];
            for (size_t i = 0; i < out_len; ++i)
                dst[i] += w * delayed[i];
        }
    }
    return cap;
}

// Independent circular complex Gaussian noise per channel and sample with an
// explicitly given variance.
inline multichannel_capture add_noise_variance(multichannel_capture cap, double variance,
                                               uint64_t seed)
{
    for (size_t ch = 0; ch < cap.channels.size(); ++ch)
    {
        rng_stream rng(mix_seed(seed, 0x6e6f6973ULL, ch));
        for (auto &v : cap.channels[ch])
            v += rng.complex_normal(variance);
    }
    return cap;
}

// Mean power of the samples where any channel is nonzero; leading and
// trailing padding does not count against the signal.
inline double occupied_mean_power(const multichannel_capture &cap)
{
    double energy = 0.0;
    size_t occupied = 0;
    for (size_t i = 0; i < cap.n_samples(); ++i)
    {
        double p = 0.0;
        for (const auto &ch : cap.channels)
            p += std::norm(ch[i]);
        if (p > 0.0)
        {
            energy += p;
            ++occupied;
        }
    }
    if (occupied == 0)
        return 0.0;
    return energy / (static_cast<double>(occupied) * cap.n_channels());
}

// AWGN scaled so that mean signal power over occupied samples over noise
// variance equals 10^(snr_db/10).
inline multichannel_capture add_awgn(const multichannel_capture &cap, double snr_db,
                                     uint64_t seed)
{
    if (!std::isfinite(snr_db))
        throw std::invalid_argument("add_awgn: snr must be finite");
    const double sig_power = occupied_mean_power(cap);
    const double variance = sig_power / std::pow(10.0, snr_db / 10.0);
    return add_noise_variance(cap, variance, seed);
}

// Per-channel LO phase state of the four-channel receiver plus the common
// reference tone injected for real-time pair alignment.
struct impairment_model
{
    std::vector<double> intra_pair_phases = {0.0, 0.0, 0.0, 0.0}; // radians per channel
    double inter_pair_lo_phase = 0.0; // radians, applied on top of pair B
    std::vector<size_t> pair_b_channels = {2, 3};
    double reference_tone_freq = 0.0; // Hz, outside the SRS comb occupancy
    double reference_tone_amplitude = 0.0;

    void validate() const
    {
        for (double ph : intra_pair_phases)
            if (!(ph >= -pi && ph < pi))
                throw std::invalid_argument("impairment_model: phases must lie in [-pi, pi)");
        if (!(inter_pair_lo_phase >= -pi && inter_pair_lo_phase < pi))
            throw std::invalid_argument("impairment_model: phases must lie in [-pi, pi)");
    }
};

// Tone frequency used by default: a fixed guard above the occupied band, on
// an FFT bin so it never leaks into the extracted grid.
inline double default_tone_freq(const waveform_config &cfg, int guard_subcarriers = 8)
{
    return (cfg.n_subcarriers / 2 + guard_subcarriers) * cfg.subcarrier_spacing;
}

// Rotate each channel by its LO phase and add the common reference tone onto
// the designated taps, each tap observing the tone through its own LO phase.
inline multichannel_capture apply_impairments(multichannel_capture cap,
                                              const impairment_model &imp, uint64_t seed)
{
    imp.validate();
    (void)seed; // phases are part of the model; no randomness is drawn here
    if (imp.intra_pair_phases.size() != cap.n_channels())
        throw std::invalid_argument("apply_impairments: phase table size mismatch");
    if (cap.layout.reference_a >= cap.n_channels() ||
        cap.layout.reference_b >= cap.n_channels())
        throw std::invalid_argument("apply_impairments: reference taps not in layout");

    auto lo_phase = [&](size_t ch) {
        double ph = imp.intra_pair_phases[ch];
        if (std::find(imp.pair_b_channels.begin(), imp.pair_b_channels.end(), ch) !=
            imp.pair_b_channels.end())
            ph += imp.inter_pair_lo_phase;
        return ph;
    };

    for (size_t ch = 0; ch < cap.n_channels(); ++ch)
    {
        const double ph = lo_phase(ch);
        const cpx rot(std::cos(ph), std::sin(ph));
        for (auto &v : cap.channels[ch])
            v *= rot;
    }

    if (imp.reference_tone_amplitude > 0.0)
    {
        const double w = 2.0 * pi * imp.reference_tone_freq / cap.sample_rate;
        for (size_t tap : {cap.layout.reference_a, cap.layout.reference_b})
        {
            const double ph0 = lo_phase(tap);
            auto &dst = cap.channels[tap];
            for (size_t n = 0; n < dst.size(); ++n)
            {
                const double ph = w * static_cast<double>(n) + ph0;
                dst[n] += imp.reference_tone_amplitude * cpx(std::cos(ph), std::sin(ph));
            }
        }
    }
    return cap;
}

} // namespace srsaoa

#endif
