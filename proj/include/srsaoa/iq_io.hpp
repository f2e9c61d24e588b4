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

#ifndef srsaoa_iq_io_H
#define srsaoa_iq_io_H

#include <bit>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "srsaoa/channel.hpp"

static_assert(std::endian::native == std::endian::little,
              "IQ files are little-endian; big-endian hosts need byte swapping");

namespace srsaoa
{

struct iq_metadata
{
    double sample_rate_hz = 0.0;
    double carrier_freq_hz = 0.0;
    size_t n_channels = 0;
    size_t n_samples = 0;
    channel_layout layout;
    std::string created_utc;
};

namespace detail
{
inline std::string layout_to_string(const channel_layout &l)
{
    auto join = [](const std::vector<size_t> &v) {
        std::string s;
        for (size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
        return s;
    };
    return "aoa:" + join(l.aoa_channels) + ";pair_b:" + join(l.pair_b_channels) +
           ";ref_a:" + std::to_string(l.reference_a) + ";ref_b:" + std::to_string(l.reference_b);
}

inline channel_layout layout_from_string(const std::string &s)
{
    channel_layout l;
    l.aoa_channels.clear();
    l.pair_b_channels.clear();
    std::stringstream ss(s);
    std::string part;
    while (std::getline(ss, part, ';'))
    {
        const size_t colon = part.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("iq metadata: malformed layout field '" + s + "'");
        const std::string name = part.substr(0, colon);
        const std::string rest = part.substr(colon + 1);
        std::vector<size_t> vals;
        std::stringstream vs(rest);
        std::string tok;
        while (std::getline(vs, tok, ','))
            vals.push_back(std::stoul(tok));
        if (name == "aoa")
            l.aoa_channels = vals;
        else if (name == "pair_b")
            l.pair_b_channels = vals;
        else if (name == "ref_a" && vals.size() == 1)
            l.reference_a = vals[0];
        else if (name == "ref_b" && vals.size() == 1)
            l.reference_b = vals[0];
        else
            throw std::runtime_error("iq metadata: unknown layout field '" + name + "'");
    }
    return l;
}

inline std::string utc_timestamp()
{
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}
} // namespace detail

// Write one capture as per-channel interleaved float32 little-endian I,Q
// files <stem>.ch<k>.iq plus the plain-text sidecar <stem>.meta.
inline void write_iq(const multichannel_capture &cap, const std::string &stem,
                     double carrier_freq_hz)
{
    cap.validate();
    for (size_t ch = 0; ch < cap.n_channels(); ++ch)
    {
        const std::string path = stem + ".ch" + std::to_string(ch) + ".iq";
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("write_iq: cannot open " + path);
        std::vector<float> buf(2 * cap.channels[ch].size());
        for (size_t i = 0; i < cap.channels[ch].size(); ++i)
        {
            buf[2 * i] = static_cast<float>(cap.channels[ch][i].real());
            buf[2 * i + 1] = static_cast<float>(cap.channels[ch][i].imag());
        }
        f.write(reinterpret_cast<const char *>(buf.data()),
                static_cast<std::streamsize>(buf.size() * sizeof(float)));
        if (!f)
            throw std::runtime_error("write_iq: short write on " + path);
    }

    std::ofstream meta(stem + ".meta");
    if (!meta)
        throw std::runtime_error("write_iq: cannot open " + stem + ".meta");
    char num[64];
    std::snprintf(num, sizeof(num), "%.17g", cap.sample_rate);
    meta << "sample_rate_hz = " << num << "\n";
    std::snprintf(num, sizeof(num), "%.17g", carrier_freq_hz);
    meta << "carrier_freq_hz = " << num << "\n";
    meta << "n_channels = " << cap.n_channels() << "\n";
    meta << "n_samples = " << cap.n_samples() << "\n";
    meta << "layout = " << detail::layout_to_string(cap.layout) << "\n";
    meta << "created_utc = " << detail::utc_timestamp() << "\n";
}

inline std::pair<multichannel_capture, iq_metadata> read_iq(const std::string &stem)
{
    const std::string meta_path = stem + ".meta";
    std::ifstream meta(meta_path);
    if (!meta)
        throw std::runtime_error("read_iq: missing sidecar " + meta_path);

    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(meta, line))
    {
        if (line.empty() || line[0] == '#')
            continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("read_iq: malformed sidecar line '" + line + "'");
        auto trim = [](std::string s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t\r");
            return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    for (const char *req : {"sample_rate_hz", "carrier_freq_hz", "n_channels", "n_samples",
                            "layout", "created_utc"})
        if (!kv.count(req))
            throw std::runtime_error("read_iq: sidecar missing key '" + std::string(req) + "'");

    iq_metadata md;
    md.sample_rate_hz = std::stod(kv["sample_rate_hz"]);
    md.carrier_freq_hz = std::stod(kv["carrier_freq_hz"]);
    md.n_channels = std::stoul(kv["n_channels"]);
    md.n_samples = std::stoul(kv["n_samples"]);
    md.layout = detail::layout_from_string(kv["layout"]);
    md.created_utc = kv["created_utc"];

    multichannel_capture cap;
    cap.sample_rate = md.sample_rate_hz;
    cap.layout = md.layout;
    cap.channels.resize(md.n_channels);
    for (size_t ch = 0; ch < md.n_channels; ++ch)
    {
        const std::string path = stem + ".ch" + std::to_string(ch) + ".iq";
        std::ifstream f(path, std::ios::binary | std::ios::ate);
        if (!f)
            throw std::runtime_error("read_iq: missing channel file " + path);
        const auto bytes = static_cast<size_t>(f.tellg());
        if (bytes % (2 * sizeof(float)) != 0)
            throw std::runtime_error("read_iq: truncated channel file " + path);
        const size_t n = bytes / (2 * sizeof(float));
        if (n != md.n_samples)
            throw std::runtime_error("read_iq: " + path + " holds " + std::to_string(n) +
                                     " samples but sidecar says " +
                                     std::to_string(md.n_samples));
        f.seekg(0);
        std::vector<float> buf(2 * n);
        f.read(reinterpret_cast<char *>(buf.data()),
               static_cast<std::streamsize>(bytes));
        if (!f)
            throw std::runtime_error("read_iq: short read on " + path);
        cap.channels[ch].resize(n);
        for (size_t i = 0; i < n; ++i)
            cap.channels[ch][i] = cpx(buf[2 * i], buf[2 * i + 1]);
    }
    return {std::move(cap), std::move(md)};
}

} // namespace srsaoa

#endif
