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

#ifndef srsaoa_campaign_H
#define srsaoa_campaign_H

#include <cctype>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "srsaoa/scenario.hpp"

namespace srsaoa
{

enum class algorithm
{
    music,
    esprit,
    jade
};

inline const char *algorithm_name(algorithm a)
{
    switch (a)
    {
        case algorithm::music: return "MUSIC";
        case algorithm::esprit: return "ESPRIT";
        case algorithm::jade: return "JADE";
    }
    return "?";
}

struct campaign_config
{
    std::string waveform_id = "I";
    std::vector<double> distances_m;
    double true_angle_deg = 0.0;
    std::vector<double> snr_db = {20.0}; // one entry, or one per distance
    bool noiseless = false;
    int n_trials = 200;
    std::vector<algorithm> algorithms = {algorithm::music, algorithm::esprit, algorithm::jade};
    uint64_t seed = 0;
    double grid_step_deg = 0.1;
    int stacking_m = 8;
    std::string out_dir = ".";

    // scene
    double tx_height_m = 1.5;
    double rx_height_m = 1.5;
    cpx ground_reflection{-0.7, 0.0};
    cpx wall_reflection{0.5, 0.0};
    bool wall_enabled = true;
    double wall_standoff_m = 25.0;
    double wall_x_min_m = 10.0;
    double wall_x_max_m = 22.5;
    double wall_height_m = 10.0;

    // impairments (off for campaigns: the simulation analysis assumes
    // perfect calibration); used by the simulate/estimate stages
    bool impairments = false;
    std::vector<double> intra_pair_phases_rad = {0.4, -0.7, 1.1, 0.2};
    double tone_rel_amplitude = 0.25;
    int tone_guard_subcarriers = 8;

    // snapshot-level stages
    double snapshot_ms = 3.0;
    int n_snapshots = 1;

    int srs_root = 25;
    double srs_cyclic_shift = 0.0;

    double snr_for_distance(size_t distance_index) const
    {
        if (snr_db.size() == 1)
            return snr_db.front();
        return snr_db.at(distance_index);
    }

    scene_geometry scene_for_distance(double distance) const
    {
        scene_geometry s = make_default_scene(distance, true_angle_deg, tx_height_m, rx_height_m);
        s.ground_reflection = ground_reflection;
        s.wall_reflection = wall_reflection;
        s.has_wall = wall_enabled;
        s.wall_standoff = wall_standoff_m;
        s.wall_x_min = wall_x_min_m;
        s.wall_x_max = wall_x_max_m;
        s.wall_height = wall_height_m;
        return s;
    }
};

namespace detail
{
struct config_error : std::runtime_error
{
    using std::runtime_error::runtime_error;
};

inline std::string trim(const std::string &s)
{
    const auto b = s.find_first_not_of(" \t");
    const auto e = s.find_last_not_of(" \t\r");
    return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
}

inline double parse_double(const std::string &path, int line, const std::string &key,
                           const std::string &v)
{
    try
    {
        size_t used = 0;
        const double d = std::stod(v, &used);
        if (used != v.size())
            throw std::invalid_argument(v);
        return d;
    }
    catch (const std::exception &)
    {
        throw config_error(path + ":" + std::to_string(line) + ": key '" + key +
                           "' expects a number, got '" + v + "'");
    }
}

inline cpx parse_complex(const std::string &path, int line, const std::string &key,
                         std::string v)
{
    // accepted forms: "a" or "a+bi" / "a-bi"
    if (!v.empty() && v.back() == 'i')
    {
        v.pop_back();
        size_t split = std::string::npos;
        for (size_t i = 1; i < v.size(); ++i)
            if ((v[i] == '+' || v[i] == '-') && v[i - 1] != 'e' && v[i - 1] != 'E')
                split = i;
        if (split == std::string::npos)
            throw config_error(path + ":" + std::to_string(line) + ": key '" + key +
                               "' expects a complex value like -0.7+0.1i");
        return cpx(parse_double(path, line, key, v.substr(0, split)),
                   parse_double(path, line, key, v.substr(split)));
    }
    return cpx(parse_double(path, line, key, v), 0.0);
}

inline std::vector<std::string> split_list(const std::string &v)
{
    std::vector<std::string> out;
    std::stringstream ss(v);
    std::string tok;
    while (std::getline(ss, tok, ','))
        out.push_back(trim(tok));
    return out;
}

inline bool parse_bool(const std::string &path, int line, const std::string &key,
                       const std::string &v)
{
    if (v == "true" || v == "on" || v == "1")
        return true;
    if (v == "false" || v == "off" || v == "0")
        return false;
    throw config_error(path + ":" + std::to_string(line) + ": key '" + key +
                       "' expects true/false");
}
} // namespace detail

inline std::vector<algorithm> parse_algorithm_list(const std::string &list)
{
    std::vector<algorithm> algos;
    for (const std::string &name : detail::split_list(list))
    {
        std::string low;
        for (char c : name)
            low += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        if (low == "music")
            algos.push_back(algorithm::music);
        else if (low == "esprit")
            algos.push_back(algorithm::esprit);
        else if (low == "jade" || low == "2d-esprit" || low == "jade-esprit")
            algos.push_back(algorithm::jade);
        else
            throw std::runtime_error("unknown algorithm '" + name + "'");
    }
    if (algos.empty())
        throw std::runtime_error("algorithm list is empty");
    return algos;
}

// Plain key = value configuration with '#' comments. Unknown and duplicate
// keys are rejected with the offending line.
inline campaign_config parse_config(const std::string &path)
{
    std::ifstream f(path);
    if (!f)
        throw detail::config_error("cannot open config file " + path);

    campaign_config cfg;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;

    const std::set<std::string> known = {
        "waveform", "distances_m", "true_angle_deg", "snr_db", "noiseless", "n_trials",
        "algorithms", "seed", "grid_step_deg", "stacking_m", "out_dir", "tx_height_m",
        "rx_height_m", "ground_reflection", "wall_reflection", "wall_enabled",
        "wall_standoff_m", "wall_x_min_m", "wall_x_max_m", "wall_height_m", "impairments",
        "intra_pair_phases_rad", "tone_rel_amplitude", "tone_guard_subcarriers",
        "snapshot_ms", "n_snapshots", "srs_root", "srs_cyclic_shift"};

    while (std::getline(f, line))
    {
        ++line_no;
        const std::string stripped = detail::trim(line.substr(0, line.find('#')));
        if (stripped.empty())
            continue;
        const size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw detail::config_error(path + ":" + std::to_string(line_no) +
                                       ": expected 'key = value'");
        const std::string key = detail::trim(stripped.substr(0, eq));
        const std::string value = detail::trim(stripped.substr(eq + 1));

        if (!known.count(key))
            throw detail::config_error(path + ":" + std::to_string(line_no) +
                                       ": unknown key '" + key + "'");
        if (!seen.insert(key).second)
            throw detail::config_error(path + ":" + std::to_string(line_no) +
                                       ": duplicate key '" + key + "'");
        if (value.empty())
            throw detail::config_error(path + ":" + std::to_string(line_no) + ": key '" + key +
                                       "' has no value");

        if (key == "waveform")
        {
            cfg.waveform_id = value;
            make_waveform_config(value); // validates the id
        }
        else if (key == "distances_m")
        {
            cfg.distances_m.clear();
            for (const auto &tok : detail::split_list(value))
                cfg.distances_m.push_back(detail::parse_double(path, line_no, key, tok));
            for (size_t i = 0; i < cfg.distances_m.size(); ++i)
            {
                if (cfg.distances_m[i] <= 0.0)
                    throw detail::config_error(path + ":" + std::to_string(line_no) +
                                               ": key 'distances_m' must be positive");
                if (i > 0 && cfg.distances_m[i] <= cfg.distances_m[i - 1])
                    throw detail::config_error(path + ":" + std::to_string(line_no) +
                                               ": key 'distances_m' must be ascending");
            }
        }
        else if (key == "true_angle_deg")
            cfg.true_angle_deg = detail::parse_double(path, line_no, key, value);
        else if (key == "snr_db")
        {
            cfg.snr_db.clear();
            for (const auto &tok : detail::split_list(value))
                cfg.snr_db.push_back(detail::parse_double(path, line_no, key, tok));
        }
        else if (key == "noiseless")
            cfg.noiseless = detail::parse_bool(path, line_no, key, value);
        else if (key == "n_trials")
        {
            cfg.n_trials = static_cast<int>(detail::parse_double(path, line_no, key, value));
            if (cfg.n_trials < 1)
                throw detail::config_error(path + ":" + std::to_string(line_no) +
                                           ": key 'n_trials' must be at least 1");
        }
        else if (key == "algorithms")
        {
            try
            {
                cfg.algorithms = parse_algorithm_list(value);
            }
            catch (const std::exception &e)
            {
                throw detail::config_error(path + ":" + std::to_string(line_no) + ": " +
                                           e.what());
            }
        }
        else if (key == "seed")
            cfg.seed = static_cast<uint64_t>(detail::parse_double(path, line_no, key, value));
        else if (key == "grid_step_deg")
        {
            cfg.grid_step_deg = detail::parse_double(path, line_no, key, value);
            if (cfg.grid_step_deg <= 0.0 || cfg.grid_step_deg > 10.0)
                throw detail::config_error(path + ":" + std::to_string(line_no) +
                                           ": key 'grid_step_deg' out of range (0, 10]");
        }
        else if (key == "stacking_m")
        {
            cfg.stacking_m = static_cast<int>(detail::parse_double(path, line_no, key, value));
            if (cfg.stacking_m < 2)
                throw detail::config_error(path + ":" + std::to_string(line_no) +
                                           ": key 'stacking_m' must be at least 2");
        }
        else if (key == "out_dir")
            cfg.out_dir = value;
        else if (key == "tx_height_m")
            cfg.tx_height_m = detail::parse_double(path, line_no, key, value);
        else if (key == "rx_height_m")
            cfg.rx_height_m = detail::parse_double(path, line_no, key, value);
        else if (key == "ground_reflection")
            cfg.ground_reflection = detail::parse_complex(path, line_no, key, value);
        else if (key == "wall_reflection")
            cfg.wall_reflection = detail::parse_complex(path, line_no, key, value);
        else if (key == "wall_enabled")
            cfg.wall_enabled = detail::parse_bool(path, line_no, key, value);
        else if (key == "wall_standoff_m")
            cfg.wall_standoff_m = detail::parse_double(path, line_no, key, value);
        else if (key == "wall_x_min_m")
            cfg.wall_x_min_m = detail::parse_double(path, line_no, key, value);
        else if (key == "wall_x_max_m")
            cfg.wall_x_max_m = detail::parse_double(path, line_no, key, value);
        else if (key == "wall_height_m")
            cfg.wall_height_m = detail::parse_double(path, line_no, key, value);
        else if (key == "impairments")
            cfg.impairments = detail::parse_bool(path, line_no, key, value);
        else if (key == "intra_pair_phases_rad")
        {
            cfg.intra_pair_phases_rad.clear();
            for (const auto &tok : detail::split_list(value))
                cfg.intra_pair_phases_rad.push_back(
                    detail::parse_double(path, line_no, key, tok));
        }
        else if (key == "tone_rel_amplitude")
            cfg.tone_rel_amplitude = detail::parse_double(path, line_no, key, value);
        else if (key == "tone_guard_subcarriers")
            cfg.tone_guard_subcarriers =
                static_cast<int>(detail::parse_double(path, line_no, key, value));
        else if (key == "snapshot_ms")
            cfg.snapshot_ms = detail::parse_double(path, line_no, key, value);
        else if (key == "n_snapshots")
            cfg.n_snapshots = static_cast<int>(detail::parse_double(path, line_no, key, value));
        else if (key == "srs_root")
            cfg.srs_root = static_cast<int>(detail::parse_double(path, line_no, key, value));
        else if (key == "srs_cyclic_shift")
            cfg.srs_cyclic_shift = detail::parse_double(path, line_no, key, value);
    }

    if (cfg.distances_m.empty())
        throw detail::config_error(path + ": key 'distances_m' is required");
    if (cfg.snr_db.size() != 1 && cfg.snr_db.size() != cfg.distances_m.size())
        throw detail::config_error(path + ": key 'snr_db' must hold one value or one per "
                                   "distance");
    return cfg;
}

struct campaign_row
{
    double distance_m = 0.0;
    algorithm algo = algorithm::music;
    double rmse_deg = 0.0;
    double bias_deg = 0.0;
    double mean_sinr_db = 0.0;
    int n_valid = 0;
};

struct campaign_result
{
    std::vector<campaign_row> rows; // distance-major, algorithm order as configured
};

// Monte-Carlo RMSE campaign: for every distance, n_trials independent
// one-slot transmissions with index-derived seeds run through the full
// receiver; squared errors accumulate against the true line-of-sight angle.
inline campaign_result run_montecarlo(const campaign_config &cfg,
                                      bool reverse_trial_order = false)
{
    const waveform_config wf = make_waveform_config(cfg.waveform_id);
    const ula_geometry geom = make_half_wavelength_ula(3, wf.carrier_freq);
    const baseband_signal reference = make_reference_slot(wf, cfg.srs_root,
                                                          cfg.srs_cyclic_shift);
    const reference_correlator corr(reference.samples);

    pipeline_options popts;
    popts.grid_step_deg = cfg.grid_step_deg;
    popts.stacking_m = cfg.stacking_m;
    popts.align_pairs_enabled = cfg.impairments;
    popts.srs_root = cfg.srs_root;
    popts.srs_cyclic_shift = cfg.srs_cyclic_shift;
    popts.run_music = false;
    popts.run_esprit = false;
    popts.run_jade = false;
    for (algorithm a : cfg.algorithms)
    {
        if (a == algorithm::music)
            popts.run_music = true;
        if (a == algorithm::esprit)
            popts.run_esprit = true;
        if (a == algorithm::jade)
            popts.run_jade = true;
    }

    const size_t slot_len = wf.slot_samples();
    campaign_result result;

    for (size_t di = 0; di < cfg.distances_m.size(); ++di)
    {
        const double distance = cfg.distances_m[di];

        struct trial_outcome
        {
            bool detected = false;
            double sinr_db = 0.0;
            std::map<algorithm, double> angle;
        };
        std::vector<trial_outcome> outcomes(cfg.n_trials);

        scenario_options sopts;
        sopts.cfg = wf;
        sopts.geom = geom;
        sopts.scene = cfg.scene_for_distance(distance);
        sopts.snr_db = cfg.snr_for_distance(di);
        sopts.noiseless = cfg.noiseless;
        sopts.impairments = cfg.impairments;
        sopts.intra_pair_phases = cfg.intra_pair_phases_rad;
        sopts.tone_rel_amplitude = cfg.tone_rel_amplitude;
        sopts.tone_guard_subcarriers = cfg.tone_guard_subcarriers;
        sopts.srs_root = cfg.srs_root;
        sopts.srs_cyclic_shift = cfg.srs_cyclic_shift;

        calibration_table table;
        table.intra_pair_phases.assign(4, 0.0);
        if (cfg.impairments)
            table.intra_pair_phases = cfg.intra_pair_phases_rad;

        for (int step = 0; step < cfg.n_trials; ++step)
        {
            const int trial = reverse_trial_order ? cfg.n_trials - 1 - step : step;
            scenario_options topts = sopts;
            topts.seed = mix_seed(cfg.seed, di, static_cast<uint64_t>(trial));
            rng_stream offset_rng(mix_seed(topts.seed, 0x6f666673ULL));
            topts.embed_offset = offset_rng.integer(slot_len - 64);

            auto [capture, truth] = synthesize_capture(topts);
            pipeline_options per_trial = popts;
            per_trial.tone_freq = truth.tone_freq;

            const multichannel_capture calibrated = apply_calibration(capture, table);
            const std::optional<slot_result> slot =
                process_slot(calibrated, wf, corr, geom, per_trial);
            if (!slot)
                continue;

            trial_outcome &out = outcomes[trial];
            out.detected = true;
            out.sinr_db = slot->sinr_db;
            if (const auto v = slot_result::selected(slot->music))
                out.angle[algorithm::music] = *v;
            if (const auto v = slot_result::selected(slot->esprit))
                out.angle[algorithm::esprit] = *v;
            if (const auto v = slot_result::selected(slot->jade))
                out.angle[algorithm::jade] = *v;
        }

        for (algorithm a : cfg.algorithms)
        {
            campaign_row row;
            row.distance_m = distance;
            row.algo = a;
            double sq = 0.0, bias = 0.0, sinr = 0.0;
            int n = 0;
            for (const auto &out : outcomes)
            {
                if (!out.detected || !out.angle.count(a))
                    continue;
                const double err = out.angle.at(a) - cfg.true_angle_deg;
                sq += err * err;
                bias += err;
                sinr += out.sinr_db;
                ++n;
            }
            row.n_valid = n;
            if (n > 0)
            {
                row.rmse_deg = std::sqrt(sq / n);
                row.bias_deg = bias / n;
                row.mean_sinr_db = sinr / n;
            }
            result.rows.push_back(row);
        }
    }
    return result;
}

namespace detail
{
inline std::string format_full(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}
} // namespace detail

// CSV with one row per (distance, algorithm) plus a plot script that renders
// RMSE against distance from the CSV.
inline void emit_results(const campaign_result &result, const std::string &csv_path,
                         const std::string &plot_path)
{
    std::ofstream csv(csv_path, std::ios::binary); // LF line endings everywhere
    if (!csv)
        throw std::runtime_error("emit_results: cannot open " + csv_path);
    csv << "distance_m,algorithm,rmse_deg,bias_deg,mean_sinr_db,n_valid\n";
    for (const auto &row : result.rows)
        csv << detail::format_full(row.distance_m) << ',' << algorithm_name(row.algo) << ','
            << detail::format_full(row.rmse_deg) << ',' << detail::format_full(row.bias_deg)
            << ',' << detail::format_full(row.mean_sinr_db) << ',' << row.n_valid << '\n';
    if (!csv)
        throw std::runtime_error("emit_results: short write on " + csv_path);
    csv.close();

    std::ofstream plot(plot_path, std::ios::binary);
    if (!plot)
        throw std::runtime_error("emit_results: cannot open " + plot_path);
    plot << "#!/usr/bin/env python3\n"
            "# Renders RMSE vs distance per algorithm from the campaign CSV.\n"
            "import csv\n"
            "import sys\n"
            "from collections import defaultdict\n"
            "\n"
            "import matplotlib\n"
            "matplotlib.use('Agg')\n"
            "import matplotlib.pyplot as plt\n"
            "\n"
            "path = sys.argv[1] if len(sys.argv) > 1 else '"
         << csv_path
         << "'\n"
            "series = defaultdict(list)\n"
            "with open(path) as f:\n"
            "    for row in csv.DictReader(f):\n"
            "        series[row['algorithm']].append(\n"
            "            (float(row['distance_m']), float(row['rmse_deg'])))\n"
            "\n"
            "fig, ax = plt.subplots()\n"
            "for name, pts in sorted(series.items()):\n"
            "    pts.sort()\n"
            "    ax.plot([p[0] for p in pts], [p[1] for p in pts], marker='o', label=name)\n"
            "ax.set_xlabel('Distance (m)')\n"
            "ax.set_ylabel('RMSE (deg)')\n"
            "ax.grid(True)\n"
            "ax.legend()\n"
            "out = path.rsplit('.', 1)[0] + '.png'\n"
            "fig.savefig(out, dpi=150)\n"
            "print('wrote', out)\n";
}

} // namespace srsaoa

#endif
