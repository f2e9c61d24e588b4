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

#ifndef srsaoa_scenario_H
#define srsaoa_scenario_H

#include "srsaoa/channel.hpp"
#include "srsaoa/pipeline.hpp"

namespace srsaoa
{

// Parking-lot-like default scene: flat ground, one building wall parallel to
// the boresight at a lateral standoff. The wall segment is sized so its
// specular point exists only for line-of-sight distances between twice
// wall_x_min and twice wall_x_max (20 m to 45 m with the defaults).
inline scene_geometry make_default_scene(double distance_m, double azimuth_deg = 0.0,
                                         double tx_height = 1.5, double rx_height = 1.5)
{
    scene_geometry scene;
    scene.rx_position = {0.0, 0.0, rx_height};
    const double az = deg2rad(azimuth_deg);
    scene.tx_position = {distance_m * std::cos(az), distance_m * std::sin(az), tx_height};
    return scene;
}

struct scenario_options
{
    waveform_config cfg;
    ula_geometry geom;
    scene_geometry scene;
    double snr_db = 20.0;       // per occupied resource element; infinity = noiseless
    bool noiseless = false;
    int n_slots = 1;            // consecutive transmitted slots
    size_t buffer_slots = 2;    // capture length in slots (>= n_slots)
    size_t embed_offset = 0;    // sample offset of the first slot in the capture
    bool impairments = false;
    std::vector<double> intra_pair_phases = {0.4, -0.7, 1.1, 0.2};
    double inter_pair_lo_phase = 0.0; // drawn per run when randomize_inter_pair
    bool randomize_inter_pair = true;
    double tone_rel_amplitude = 0.25; // relative to the per-element signal RMS
    int tone_guard_subcarriers = 8;
    int srs_root = 25;
    double srs_cyclic_shift = 0.0;
    uint64_t seed = 0;
};

struct scenario_truth
{
    double los_azimuth_deg = 0.0;
    size_t embed_offset = 0;
    double inter_pair_lo_phase = 0.0;
    double tone_freq = 0.0;
    double per_re_power = 0.0;     // mean occupied-bin power after the channel
    double noise_variance = 0.0;
    std::vector<propagation_path> paths; // differential delays
};

namespace detail
{
// Mean occupied-bin power of the propagated signal, measured by demodulating
// the first slot of the clean capture. This anchors the configured SNR to
// the quantity the comb SINR estimator reports.
inline double measure_per_re_power(const multichannel_capture &cap, const waveform_config &cfg)
{
    double acc = 0.0;
    size_t count = 0;
    for (size_t ch : cap.layout.aoa_channels)
    {
        baseband_signal one;
        one.sample_rate = cap.sample_rate;
        one.samples = cap.channels[ch];
        const resource_grid grid = ofdm_demodulate(one, cfg, 0);
        const cmatrix pilots = extract_srs_symbols(grid, cfg);
        for (const auto &v : pilots.data)
            acc += std::norm(v);
        count += pilots.data.size();
    }
    return acc / static_cast<double>(count);
}
} // namespace detail

// Synthesize one received capture: propagate the transmitted slots over the
// scene rays, embed at the requested offset, optionally apply the hardware
// impairment model, then add noise scaled to the requested per-RE SNR.
inline std::pair<multichannel_capture, scenario_truth>
synthesize_capture(const scenario_options &opts)
{
    const waveform_config &cfg = opts.cfg;
    const baseband_signal slot = make_reference_slot(cfg, opts.srs_root, opts.srs_cyclic_shift);

    baseband_signal tx;
    tx.sample_rate = slot.sample_rate;
    tx.samples.reserve(slot.samples.size() * opts.n_slots);
    for (int i = 0; i < opts.n_slots; ++i)
        tx.samples.insert(tx.samples.end(), slot.samples.begin(), slot.samples.end());

    std::vector<propagation_path> paths =
        remove_bulk_delay(compute_scene_paths(opts.scene, opts.geom));
    multichannel_capture propagated = propagate(tx, paths, opts.geom);

    scenario_truth truth;
    truth.paths = paths;
    truth.los_azimuth_deg = paths.front().azimuth_deg;
    truth.embed_offset = opts.embed_offset;
    truth.per_re_power = detail::measure_per_re_power(propagated, cfg);
    truth.tone_freq = default_tone_freq(cfg, opts.tone_guard_subcarriers);

    // add the pair-B reference tap and embed into the capture buffer; the
    // sub-sample interpolation tail past the last slot may be clipped
    const size_t buf_len = opts.buffer_slots * cfg.slot_samples();
    if (opts.embed_offset + tx.samples.size() > buf_len)
        throw std::invalid_argument("synthesize_capture: signal does not fit the buffer");
    const size_t n_copy = std::min(propagated.n_samples(), buf_len - opts.embed_offset);

    multichannel_capture cap;
    cap.sample_rate = cfg.sample_rate;
    cap.layout = channel_layout{};
    cap.channels.assign(4, cvec(buf_len, cpx(0.0, 0.0)));
    for (size_t ch = 0; ch < 3; ++ch)
        for (size_t i = 0; i < n_copy; ++i)
            cap.channels[ch][opts.embed_offset + i] = propagated.channels[ch][i];
    // channel 3 is the dedicated pair-B reference tap: tone and noise only

    rng_stream run_rng(mix_seed(opts.seed, 0x73636e72ULL));
    if (opts.impairments)
    {
        impairment_model imp;
        imp.intra_pair_phases = opts.intra_pair_phases;
        imp.pair_b_channels = cap.layout.pair_b_channels;
        imp.inter_pair_lo_phase = opts.randomize_inter_pair
                                      ? run_rng.uniform(-pi, std::nextafter(pi, 0.0))
                                      : opts.inter_pair_lo_phase;
        imp.reference_tone_freq = truth.tone_freq;
        imp.reference_tone_amplitude = opts.tone_rel_amplitude * std::sqrt(truth.per_re_power);
        truth.inter_pair_lo_phase = imp.inter_pair_lo_phase;
        cap = apply_impairments(std::move(cap), imp, opts.seed);
    }

    if (!opts.noiseless)
    {
        truth.noise_variance = truth.per_re_power / std::pow(10.0, opts.snr_db / 10.0);
        cap = add_noise_variance(std::move(cap), truth.noise_variance,
                                 mix_seed(opts.seed, 0x6177676eULL));
    }
    return {std::move(cap), truth};
}

} // namespace srsaoa

#endif
