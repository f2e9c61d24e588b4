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

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "srsaoa/campaign.hpp"
#include "srsaoa/iq_io.hpp"

namespace
{

struct cli_options
{
    std::string config_path;
    std::string out_dir = ".";
    std::string input_stem;
    std::string algorithms;
    uint64_t seed = 0;
    bool seed_set = false;
    bool verbose = false;
};

srsaoa::campaign_config load_config(const cli_options &cli)
{
    srsaoa::campaign_config cfg = srsaoa::parse_config(cli.config_path);
    if (cli.seed_set)
        cfg.seed = cli.seed;
    if (!cli.out_dir.empty() && cli.out_dir != ".")
        cfg.out_dir = cli.out_dir;
    if (!cli.algorithms.empty())
        cfg.algorithms = srsaoa::parse_algorithm_list(cli.algorithms);
    std::filesystem::create_directories(cfg.out_dir);
    return cfg;
}

int slots_per_snapshot_duration(const srsaoa::waveform_config &wf, double snapshot_ms)
{
    return static_cast<int>(std::floor(snapshot_ms * 1e-3 / wf.slot_duration()));
}

int cmd_generate(const cli_options &cli)
{
    const srsaoa::campaign_config cfg = load_config(cli);
    const srsaoa::waveform_config wf = srsaoa::make_waveform_config(cfg.waveform_id);
    const srsaoa::baseband_signal slot =
        srsaoa::make_reference_slot(wf, cfg.srs_root, cfg.srs_cyclic_shift);

    const int n_slots = std::max(1, slots_per_snapshot_duration(wf, cfg.snapshot_ms));
    srsaoa::multichannel_capture cap;
    cap.sample_rate = wf.sample_rate;
    cap.layout.aoa_channels = {0};
    cap.layout.pair_b_channels = {};
    cap.layout.reference_a = 0;
    cap.layout.reference_b = 0;
    cap.channels.assign(1, srsaoa::cvec());
    for (int i = 0; i < n_slots; ++i)
        cap.channels[0].insert(cap.channels[0].end(), slot.samples.begin(), slot.samples.end());

    const std::string stem = cfg.out_dir + "/tx";
    srsaoa::write_iq(cap, stem, wf.carrier_freq);
    if (cli.verbose)
        std::cout << "wrote " << n_slots << " slot(s), " << cap.n_samples() << " samples to "
                  << stem << ".ch0.iq\n";
    return 0;
}

int cmd_simulate(const cli_options &cli)
{
    const srsaoa::campaign_config cfg = load_config(cli);
    const srsaoa::waveform_config wf = srsaoa::make_waveform_config(cfg.waveform_id);

    srsaoa::scenario_options sopts;
    sopts.cfg = wf;
    sopts.geom = srsaoa::make_half_wavelength_ula(3, wf.carrier_freq);
    sopts.scene = cfg.scene_for_distance(cfg.distances_m.front());
    sopts.snr_db = cfg.snr_for_distance(0);
    sopts.noiseless = cfg.noiseless;
    sopts.impairments = cfg.impairments;
    sopts.intra_pair_phases = cfg.intra_pair_phases_rad;
    sopts.tone_rel_amplitude = cfg.tone_rel_amplitude;
    sopts.tone_guard_subcarriers = cfg.tone_guard_subcarriers;
    sopts.srs_root = cfg.srs_root;
    sopts.srs_cyclic_shift = cfg.srs_cyclic_shift;

    const int slots_per_snapshot = slots_per_snapshot_duration(wf, cfg.snapshot_ms);
    if (slots_per_snapshot < 2)
        throw std::runtime_error("simulate: snapshot_ms must cover at least two slots");

    // one long recording of back-to-back snapshots
    srsaoa::multichannel_capture recording;
    for (int snap = 0; snap < cfg.n_snapshots; ++snap)
    {
        srsaoa::scenario_options per = sopts;
        per.n_slots = slots_per_snapshot;
        per.buffer_slots = slots_per_snapshot;
        per.embed_offset = 0;
        per.seed = srsaoa::mix_seed(cfg.seed, 0x736e6170ULL, static_cast<uint64_t>(snap));
        auto [cap, truth] = srsaoa::synthesize_capture(per);
        if (snap == 0)
        {
            recording = std::move(cap);
            if (cli.verbose)
                std::cout << "LOS azimuth " << truth.los_azimuth_deg << " deg, tone "
                          << truth.tone_freq / 1e6 << " MHz, per-RE power "
                          << truth.per_re_power << "\n";
        }
        else
            for (size_t ch = 0; ch < recording.n_channels(); ++ch)
                recording.channels[ch].insert(recording.channels[ch].end(),
                                              cap.channels[ch].begin(), cap.channels[ch].end());
    }

    const std::string stem = cfg.out_dir + "/capture";
    srsaoa::write_iq(recording, stem, wf.carrier_freq);
    if (cli.verbose)
        std::cout << "wrote " << cfg.n_snapshots << " snapshot(s), " << recording.n_samples()
                  << " samples per channel to " << stem << ".ch*.iq\n";
    return 0;
}

int cmd_estimate(const cli_options &cli)
{
    const srsaoa::campaign_config cfg = load_config(cli);
    const srsaoa::waveform_config wf = srsaoa::make_waveform_config(cfg.waveform_id);

    auto [capture, meta] = srsaoa::read_iq(cli.input_stem);
    if (std::abs(meta.sample_rate_hz - wf.sample_rate) > 1.0)
        throw std::runtime_error("estimate: capture sample rate does not match waveform '" +
                                 cfg.waveform_id + "'");

    const srsaoa::ula_geometry geom = srsaoa::make_half_wavelength_ula(3, wf.carrier_freq);
    const srsaoa::baseband_signal reference =
        srsaoa::make_reference_slot(wf, cfg.srs_root, cfg.srs_cyclic_shift);
    const srsaoa::reference_correlator corr(reference.samples);

    srsaoa::pipeline_options popts;
    popts.grid_step_deg = cfg.grid_step_deg;
    popts.stacking_m = cfg.stacking_m;
    popts.align_pairs_enabled = cfg.impairments;
    popts.tone_freq = srsaoa::default_tone_freq(wf, cfg.tone_guard_subcarriers);
    popts.srs_root = cfg.srs_root;
    popts.srs_cyclic_shift = cfg.srs_cyclic_shift;
    popts.run_music = popts.run_esprit = popts.run_jade = false;
    for (srsaoa::algorithm a : cfg.algorithms)
    {
        if (a == srsaoa::algorithm::music)
            popts.run_music = true;
        if (a == srsaoa::algorithm::esprit)
            popts.run_esprit = true;
        if (a == srsaoa::algorithm::jade)
            popts.run_jade = true;
    }

    srsaoa::calibration_table table;
    table.intra_pair_phases.assign(capture.n_channels(), 0.0);
    if (cfg.impairments)
        table.intra_pair_phases = cfg.intra_pair_phases_rad;

    const size_t snapshot_samples = static_cast<size_t>(
        std::llround(cfg.snapshot_ms * 1e-3 * wf.sample_rate));
    const auto results = srsaoa::process_capture(capture, snapshot_samples, wf, corr, geom,
                                                 table, popts);

    const std::string csv_path = cfg.out_dir + "/snapshots.csv";
    std::ofstream csv(csv_path, std::ios::binary);
    if (!csv)
        throw std::runtime_error("estimate: cannot open " + csv_path);
    csv << "snapshot,algorithm,angle_deg,sinr_db,n_slots,n_kept\n";
    char num[64];
    for (size_t s = 0; s < results.size(); ++s)
    {
        const auto &res = results[s];
        auto emit = [&](const char *name, const srsaoa::algorithm_average &avg) {
            size_t kept = 0;
            for (bool k : avg.kept_mask)
                kept += k;
            csv << s << ',' << name << ',';
            if (avg.empty)
                csv << "nan";
            else
            {
                std::snprintf(num, sizeof(num), "%.17g", avg.average);
                csv << num;
            }
            std::snprintf(num, sizeof(num), "%.17g",
                          res.sinr.empty ? std::nan("") : res.sinr.average);
            csv << ',' << num << ',' << res.slot_results.size() << ',' << kept << '\n';
        };
        if (popts.run_music)
            emit("MUSIC", res.music);
        if (popts.run_esprit)
            emit("ESPRIT", res.esprit);
        if (popts.run_jade)
            emit("JADE", res.jade);
    }
    if (cli.verbose)
        std::cout << "processed " << results.size() << " snapshot(s) -> " << csv_path << "\n";
    return 0;
}

int cmd_campaign(const cli_options &cli)
{
    const srsaoa::campaign_config cfg = load_config(cli);
    const srsaoa::campaign_result result = srsaoa::run_montecarlo(cfg);
    const std::string csv_path = cfg.out_dir + "/campaign.csv";
    const std::string plot_path = cfg.out_dir + "/plot_campaign.py";
    srsaoa::emit_results(result, csv_path, plot_path);
    if (cli.verbose)
    {
        for (const auto &row : result.rows)
            std::cout << row.distance_m << " m " << srsaoa::algorithm_name(row.algo)
                      << ": rmse " << row.rmse_deg << " deg, bias " << row.bias_deg
                      << " deg, n_valid " << row.n_valid << "\n";
    }
    std::cout << "wrote " << csv_path << " and " << plot_path << "\n";
    return 0;
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"5G NR SRS uplink angle-of-arrival simulation laboratory"};
    app.require_subcommand(1);

    cli_options cli;

    auto add_common = [&](CLI::App *sub, bool needs_config) {
        auto *opt = sub->add_option("--config", cli.config_path, "configuration file");
        if (needs_config)
            opt->required()->check(CLI::ExistingFile);
        sub->add_option("--seed", cli.seed, "master seed override")
            ->each([&](const std::string &) { cli.seed_set = true; });
        sub->add_option("--out", cli.out_dir, "output directory");
        sub->add_option("--algorithms", cli.algorithms,
                        "comma-separated subset of music,esprit,jade");
        sub->add_flag("--verbose", cli.verbose, "chatty progress output");
    };

    CLI::App *generate = app.add_subcommand("generate", "write the clean SRS uplink waveform");
    add_common(generate, true);
    CLI::App *simulate = app.add_subcommand("simulate",
                                            "propagate over the scene and write IQ files");
    add_common(simulate, true);
    CLI::App *estimate = app.add_subcommand("estimate", "process IQ files into AoA estimates");
    add_common(estimate, true);
    estimate->add_option("input", cli.input_stem, "IQ file stem (without .chN.iq)")->required();
    CLI::App *campaign = app.add_subcommand("campaign", "Monte-Carlo RMSE campaign");
    add_common(campaign, true);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try
    {
        if (generate->parsed())
            return cmd_generate(cli);
        if (simulate->parsed())
            return cmd_simulate(cli);
        if (estimate->parsed())
            return cmd_estimate(cli);
        if (campaign->parsed())
            return cmd_campaign(cli);
    }
    catch (const srsaoa::detail::config_error &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 1;
}
