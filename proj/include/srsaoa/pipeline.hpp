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

#ifndef srsaoa_pipeline_H
#define srsaoa_pipeline_H

#include <optional>

#include "srsaoa/channel.hpp"
#include "srsaoa/subspace.hpp"
#include "srsaoa/sync.hpp"

namespace srsaoa
{

// Intra-pair phase offsets known from offline calibration, one per channel.
struct calibration_table
{
    std::vector<double> intra_pair_phases;

    void validate(size_t n_channels) const
    {
        if (intra_pair_phases.size() != n_channels)
            throw std::invalid_argument("calibration_table: missing channel entries");
        for (double ph : intra_pair_phases)
            if (!std::isfinite(ph) || ph < -pi || ph >= pi)
                throw std::invalid_argument("calibration_table: phases must lie in [-pi, pi)");
    }
};

// Undo the stored per-channel phases.
inline multichannel_capture apply_calibration(multichannel_capture cap,
                                              const calibration_table &table)
{
    table.validate(cap.n_channels());
    for (size_t ch = 0; ch < cap.n_channels(); ++ch)
    {
        const double ph = table.intra_pair_phases[ch];
        if (ph == 0.0)
            continue;
        const cpx rot(std::cos(-ph), std::sin(-ph));
        for (auto &v : cap.channels[ch])
            v *= rot;
    }
    return cap;
}

// Real-time inter-pair alignment: measure the LO phase difference on the two
// reference-tone observations, rotate every pair-B channel by its negative.
inline multichannel_capture align_pairs(multichannel_capture cap, double tone_freq)
{
    if (cap.layout.reference_a >= cap.n_channels() ||
        cap.layout.reference_b >= cap.n_channels())
        throw std::invalid_argument("align_pairs: reference taps not present");

    const double phase = estimate_phase_offset(cap.channels[cap.layout.reference_a],
                                               cap.channels[cap.layout.reference_b], tone_freq,
                                               cap.sample_rate);
    const cpx rot(std::cos(-phase), std::sin(-phase));
    for (size_t ch : cap.layout.pair_b_channels)
    {
        if (ch >= cap.n_channels())
            throw std::invalid_argument("align_pairs: pair-B channel out of range");
        for (auto &v : cap.channels[ch])
            v *= rot;
    }
    return cap;
}

struct pipeline_options
{
    double grid_step_deg = 0.1;
    int stacking_m = 8;
    int max_sources = 2;
    double slot_threshold = 6.0; // peak over median of the correlation profile
    double sinr_ceiling_db = 60.0;
    double jade_rho = 0.3;
    bool align_pairs_enabled = true;
    double tone_freq = 0.0; // required when alignment is enabled
    bool run_music = true;
    bool run_esprit = true;
    bool run_jade = true;
    int srs_root = 25;
    double srs_cyclic_shift = 0.0;
};

struct slot_result
{
    size_t slot_offset = 0; // within the processed chunk
    double sinr_db = 0.0;
    std::optional<doa_result> music;
    std::optional<doa_result> esprit;
    std::optional<jade_result> jade;

    // Reported AoA per algorithm: the highest-power source.
    static std::optional<double> selected(const std::optional<doa_result> &r)
    {
        if (!r || r->sources.empty())
            return std::nullopt;
        return r->sources.front().angle_deg;
    }
    static std::optional<double> selected(const std::optional<jade_result> &r)
    {
        if (!r || r->pairs.empty())
            return std::nullopt;
        return r->pairs.front().angle_deg;
    }
};

namespace detail
{
inline frequency_snapshots build_snapshots(const std::vector<cmatrix> &extracted)
{
    const size_t m = extracted.size();
    const size_t n = extracted.front().rows * extracted.front().cols;
    frequency_snapshots y(m, n);
    for (size_t i = 0; i < m; ++i)
        for (size_t k = 0; k < n; ++k)
            y(i, k) = extracted[i].data[k];
    return y;
}

inline channel_estimate build_channel_estimate(const std::vector<cmatrix> &extracted,
                                               const cvec &pilots)
{
    const size_t m = extracted.size();
    const size_t n_sym = extracted.front().rows;
    const size_t n_pil = extracted.front().cols;
    channel_estimate h(m, n_pil);
    for (size_t i = 0; i < m; ++i)
        for (size_t k = 0; k < n_pil; ++k)
        {
            cpx acc(0.0, 0.0);
            for (size_t s = 0; s < n_sym; ++s)
                acc += extracted[i](s, k) / pilots[k];
            h(i, k) = acc / static_cast<double>(n_sym);
        }
    return h;
}
} // namespace detail

// One pass of the per-window receiver: synchronize on channel 0, share the
// offset across channels, align the pairs, demodulate the slot on every AoA
// antenna, then estimate SINR and angles. Returns nothing when the
// correlation peak does not clear the detection threshold (no transmission).
inline std::optional<slot_result> process_slot(const multichannel_capture &chunk,
                                               const waveform_config &cfg,
                                               const reference_correlator &corr,
                                               const ula_geometry &geom,
                                               const pipeline_options &opts)
{
    chunk.validate();
    const size_t slot_len = cfg.slot_samples();
    if (chunk.n_samples() < 2 * slot_len)
        throw std::invalid_argument("process_slot: chunk must span at least two slots");

    const correlation_result sync = corr.detect(chunk.channels.front());
    const double floor = median_of(sync.profile);
    if (sync.peak_magnitude <= opts.slot_threshold * floor)
        return std::nullopt;

    multichannel_capture cap = chunk;
    if (opts.align_pairs_enabled)
        cap = align_pairs(std::move(cap), opts.tone_freq);

    const cvec pilots = generate_srs_sequence(cfg, opts.srs_root, opts.srs_cyclic_shift);

    std::vector<cmatrix> extracted;
    double sinr_acc = 0.0;
    for (size_t ch : cap.layout.aoa_channels)
    {
        baseband_signal one;
        one.sample_rate = cap.sample_rate;
        one.samples = cap.channels[ch];
        const resource_grid grid = ofdm_demodulate(one, cfg, sync.peak_index);
        sinr_acc += estimate_sinr(grid, cfg, opts.sinr_ceiling_db);
        extracted.push_back(extract_srs_symbols(grid, cfg));
    }

    slot_result res;
    res.slot_offset = sync.peak_index;
    res.sinr_db = sinr_acc / static_cast<double>(cap.layout.aoa_channels.size());

    const frequency_snapshots y = detail::build_snapshots(extracted);
    const cmatrix r = sample_covariance(y);
    const eig_result eig = hermitian_eig(r);
    const int max_d = std::min(opts.max_sources, static_cast<int>(y.rows) - 1);
    // numerically rank-deficient covariances (noiseless captures) leave the
    // trailing eigenvectors arbitrary; never split past the effective rank
    int rank = 0;
    for (double lam : eig.eigenvalues)
        if (lam > 1e-10 * std::max(eig.eigenvalues[0], 1e-300))
            ++rank;
    const int d = std::clamp(estimate_num_sources(eig.eigenvalues, max_d), 1,
                             std::max(rank, 1));

    if (opts.run_music)
    {
        // the spectrum orders its peaks by height; the reported source is the
        // strongest one, so reorder by fitted path power before selection
        doa_result mr = music_from_split(make_subspace_split(eig, d), geom, d,
                                         opts.grid_step_deg);
        if (mr.sources.size() > 1)
        {
            std::vector<double> angles;
            for (const auto &s : mr.sources)
                angles.push_back(s.angle_deg);
            try
            {
                const std::vector<double> powers = detail::source_powers(r, geom, angles);
                for (size_t i = 0; i < mr.sources.size(); ++i)
                    mr.sources[i].power = powers[i];
                std::sort(mr.sources.begin(), mr.sources.end(),
                          [](const angle_estimate &a, const angle_estimate &b) {
                              return a.power > b.power;
                          });
            }
            catch (const std::runtime_error &)
            {
                // near-identical angles make the fit singular; keep peak order
            }
        }
        res.music = mr;
    }
    if (opts.run_esprit)
        res.esprit = esprit_from_split(make_subspace_split(eig, d), r, geom);

    if (opts.run_jade)
    {
        const channel_estimate h = detail::build_channel_estimate(extracted, pilots);
        const cmatrix g = jade_smoothed_matrix(h, opts.stacking_m);
        const eig_result heig = hermitian_eig(sample_covariance(g));
        // cap the requested source count at the effective rank of the stack
        int rank = 0;
        for (double lam : heig.eigenvalues)
            if (lam > 1e-10 * std::max(heig.eigenvalues[0], 1e-300))
                ++rank;
        const int d_jade = std::clamp(std::min(d, rank), 1, 2);
        cmatrix basis(g.rows, d_jade);
        for (size_t i = 0; i < g.rows; ++i)
            for (int j = 0; j < d_jade; ++j)
                basis(i, j) = heig.eigenvectors(i, j);
        res.jade = detail::jade_from_basis(basis, h, geom, opts.stacking_m, opts.jade_rho);
    }
    return res;
}

inline std::optional<slot_result> process_slot(const multichannel_capture &chunk,
                                               const waveform_config &cfg,
                                               const baseband_signal &reference,
                                               const ula_geometry &geom,
                                               const pipeline_options &opts)
{
    return process_slot(chunk, cfg, reference_correlator(reference.samples), geom, opts);
}

struct mad_filter_result
{
    std::vector<double> kept;
    std::vector<bool> mask;
};

// Robust outlier rejection: keep values within three scaled median absolute
// deviations of the median. A zero MAD degenerates to keeping only values
// equal to the median.
inline mad_filter_result mad_filter(const std::vector<double> &values)
{
    if (values.empty())
        throw std::invalid_argument("mad_filter: empty input");

    const double med = median_of(values);
    std::vector<double> dev(values.size());
    for (size_t i = 0; i < values.size(); ++i)
        dev[i] = std::abs(values[i] - med);
    const double scaled_mad = 1.4826 * median_of(dev);

    mad_filter_result res;
    res.mask.resize(values.size());
    for (size_t i = 0; i < values.size(); ++i)
    {
        const bool keep = (scaled_mad == 0.0) ? (values[i] == med)
                                              : (dev[i] <= 3.0 * scaled_mad);
        res.mask[i] = keep;
        if (keep)
            res.kept.push_back(values[i]);
    }
    return res;
}

struct algorithm_average
{
    std::vector<bool> kept_mask; // over the slots that produced an estimate
    double average = 0.0;
    bool empty = true;
};

struct snapshot_result
{
    std::vector<slot_result> slot_results;
    algorithm_average music;
    algorithm_average esprit;
    algorithm_average jade;
    algorithm_average sinr;
};

namespace detail
{
inline algorithm_average mad_average(const std::vector<double> &values)
{
    algorithm_average avg;
    if (values.empty())
        return avg;
    const mad_filter_result f = mad_filter(values);
    avg.kept_mask = f.mask;
    if (f.kept.empty())
        return avg;
    double acc = 0.0;
    for (double v : f.kept)
        acc += v;
    avg.average = acc / static_cast<double>(f.kept.size());
    avg.empty = false;
    return avg;
}
} // namespace detail

// Snapshot processing: calibrate once, walk two-slot windows advancing past
// each processed slot, MAD-filter the per-algorithm angle sets and the SINR
// set, average the survivors.
inline snapshot_result process_snapshot(const multichannel_capture &snapshot,
                                        const waveform_config &cfg,
                                        const reference_correlator &corr,
                                        const ula_geometry &geom,
                                        const calibration_table &table,
                                        const pipeline_options &opts)
{
    const size_t slot_len = cfg.slot_samples();
    if (snapshot.n_samples() < 2 * slot_len)
        throw std::invalid_argument("process_snapshot: snapshot shorter than two slots");

    const multichannel_capture cal = apply_calibration(snapshot, table);

    snapshot_result res;
    std::vector<double> music_angles, esprit_angles, jade_angles, sinrs;

    size_t cursor = 0;
    while (cursor + 2 * slot_len <= cal.n_samples())
    {
        multichannel_capture window;
        window.sample_rate = cal.sample_rate;
        window.layout = cal.layout;
        window.channels.reserve(cal.n_channels());
        for (const auto &ch : cal.channels)
            window.channels.emplace_back(ch.begin() + cursor, ch.begin() + cursor + 2 * slot_len);

        const std::optional<slot_result> slot = process_slot(window, cfg, corr, geom, opts);
        if (!slot)
        {
            cursor += slot_len;
            continue;
        }

        slot_result stored = *slot;
        stored.slot_offset += cursor;
        if (const auto v = slot_result::selected(stored.music))
            music_angles.push_back(*v);
        if (const auto v = slot_result::selected(stored.esprit))
            esprit_angles.push_back(*v);
        if (const auto v = slot_result::selected(stored.jade))
            jade_angles.push_back(*v);
        sinrs.push_back(stored.sinr_db);

        cursor += slot->slot_offset + slot_len;
        res.slot_results.push_back(std::move(stored));
    }

    res.music = detail::mad_average(music_angles);
    res.esprit = detail::mad_average(esprit_angles);
    res.jade = detail::mad_average(jade_angles);
    res.sinr = detail::mad_average(sinrs);
    return res;
}

// Outer loop: one snapshot result per snapshot-sized block of the recording,
// in order; a trailing partial block is dropped.
inline std::vector<snapshot_result> process_capture(const multichannel_capture &capture,
                                                    size_t snapshot_samples,
                                                    const waveform_config &cfg,
                                                    const reference_correlator &corr,
                                                    const ula_geometry &geom,
                                                    const calibration_table &table,
                                                    const pipeline_options &opts)
{
    if (snapshot_samples < 2 * static_cast<size_t>(cfg.slot_samples()))
        throw std::invalid_argument("process_capture: snapshot shorter than two slots");

    std::vector<snapshot_result> results;
    size_t start = 0;
    while (start + snapshot_samples <= capture.n_samples())
    {
        multichannel_capture block;
        block.sample_rate = capture.sample_rate;
        block.layout = capture.layout;
        for (const auto &ch : capture.channels)
            block.channels.emplace_back(ch.begin() + start, ch.begin() + start + snapshot_samples);
        results.push_back(process_snapshot(block, cfg, corr, geom, table, opts));
        start += snapshot_samples;
    }
    return results;
}

} // namespace srsaoa

#endif
