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

#include <cstring>

#include <catch2/catch_amalgamated.hpp>

#include "srsaoa/rng.hpp"
#include "srsaoa/waveform.hpp"

using namespace srsaoa;

TEST_CASE("configuration table")
{
    for (const char *id : {"I", "II", "III", "IV", "V", "VI", "VII", "VIII"})
    {
        const waveform_config cfg = make_waveform_config(id);
        CHECK(is_power_of_two(cfg.fft_size));
        CHECK(cfg.fft_size >= cfg.n_subcarriers);
        CHECK(cfg.sample_rate == cfg.subcarrier_spacing * cfg.fft_size);
        CHECK(cfg.n_subcarriers == 12 * cfg.n_resource_blocks);
        CHECK(cfg.comb_spacing == 2);
        CHECK(cfg.symbols_per_slot == 14);
        CHECK(cfg.cp_lengths.size() == 14);
        // whole-slot sample budget is exact
        CHECK(cfg.slot_samples() ==
              static_cast<int>(std::lround(cfg.sample_rate * cfg.slot_duration())));
    }

    const waveform_config c1 = make_waveform_config("I");
    CHECK(c1.n_resource_blocks == 51);
    CHECK(c1.fft_size == 1024);
    CHECK(c1.sample_rate == 30.72e6);
    CHECK(c1.slot_samples() == 15360);
    CHECK(c1.cp_lengths[0] == 88);
    CHECK(c1.cp_lengths[1] == 72);

    const waveform_config c2 = make_waveform_config("II");
    CHECK(c2.n_resource_blocks == 133);
    CHECK(c2.fft_size == 2048);
    CHECK(c2.sample_rate == 61.44e6);

    CHECK_THROWS_AS(make_waveform_config("IX"), std::invalid_argument);
}

TEST_CASE("srs sequence is constant modulus and deterministic")
{
    for (const char *id : {"I", "II", "III"})
    {
        const waveform_config cfg = make_waveform_config(id);
        const cvec seq = generate_srs_sequence(cfg, 25, 0.0);
        REQUIRE(static_cast<int>(seq.size()) == cfg.pilot_count());
        for (const cpx &v : seq)
            CHECK(std::abs(std::abs(v) - 1.0) < 1e-12);

        const cvec again = generate_srs_sequence(cfg, 25, 0.0);
        CHECK(std::memcmp(seq.data(), again.data(), seq.size() * sizeof(cpx)) == 0);
    }
}

TEST_CASE("srs sequence autocorrelation at the underlying prime period")
{
    // The emitted sequence is the prime-length Zadoff-Chu core cyclically
    // extended to the comb occupancy; the perfect-autocorrelation property
    // holds on the core period, which the extension repeats.
    const waveform_config cfg = make_waveform_config("I");
    const int n_zc = largest_prime_leq(cfg.pilot_count());
    REQUIRE(n_zc == 293);

    const cvec seq = generate_srs_sequence(cfg, 25, 0.0);
    // extension repeats the first samples
    for (int n = n_zc; n < cfg.pilot_count(); ++n)
        CHECK(std::abs(seq[n] - seq[n - n_zc]) < 1e-12);

    // brute-force circular autocorrelation over one period
    for (int lag = 1; lag < n_zc; ++lag)
    {
        cpx acc(0.0, 0.0);
        for (int n = 0; n < n_zc; ++n)
            acc += seq[n] * std::conj(seq[(n + lag) % n_zc]);
        CHECK(std::abs(acc) <= 1e-9 * n_zc);
    }
}

TEST_CASE("srs sequence rejects bad parameters")
{
    waveform_config tiny = make_waveform_config("I");
    tiny.n_resource_blocks = 0;
    tiny.n_subcarriers = 8; // pilot count 4
    CHECK_THROWS_AS(generate_srs_sequence(tiny, 1, 0.0), std::invalid_argument);

    const waveform_config cfg = make_waveform_config("I");
    CHECK_THROWS_AS(generate_srs_sequence(cfg, 293, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(generate_srs_sequence(cfg, 0, 0.0), std::invalid_argument);
}

TEST_CASE("comb mapping")
{
    const waveform_config cfg = make_waveform_config("I");

    SECTION("all-ones pilots occupy the even subcarriers of the SRS symbols")
    {
        const cvec ones(cfg.pilot_count(), cpx(1.0, 0.0));
        const resource_grid grid = map_to_grid(ones, cfg);
        for (size_t s = 0; s < grid.rows; ++s)
            for (size_t k = 0; k < grid.cols; ++k)
            {
                const bool occupied = s < 4 && k % 2 == 0;
                CHECK(grid(s, k) == (occupied ? cpx(1.0, 0.0) : cpx(0.0, 0.0)));
            }
    }

    SECTION("zero pilots give the all-zero grid")
    {
        const cvec zeros(cfg.pilot_count(), cpx(0.0, 0.0));
        const resource_grid grid = map_to_grid(zeros, cfg);
        for (const auto &v : grid.data)
            CHECK(v == cpx(0.0, 0.0));
    }

    SECTION("extraction undoes the mapping")
    {
        const cvec pilots = generate_srs_sequence(cfg, 25, 0.0);
        const cmatrix got = extract_srs_symbols(map_to_grid(pilots, cfg), cfg);
        REQUIRE(got.rows == 4);
        for (size_t s = 0; s < 4; ++s)
            for (int k = 0; k < cfg.pilot_count(); ++k)
                CHECK(got(s, k) == pilots[k]);
    }

    SECTION("length mismatch is rejected")
    {
        CHECK_THROWS_AS(map_to_grid(cvec(cfg.pilot_count() - 1), cfg), std::invalid_argument);
    }
}

TEST_CASE("ofdm modulation basics")
{
    const waveform_config cfg = make_waveform_config("I");

    SECTION("all-zero grid gives the all-zero signal")
    {
        const baseband_signal sig = ofdm_modulate(resource_grid(14, cfg.n_subcarriers), cfg);
        REQUIRE(static_cast<int>(sig.samples.size()) == cfg.slot_samples());
        for (const auto &v : sig.samples)
            CHECK(v == cpx(0.0, 0.0));
    }

    SECTION("a single unit pilot maps to a constant-modulus exponential")
    {
        resource_grid grid(14, cfg.n_subcarriers);
        grid(0, 100) = cpx(1.0, 0.0);
        const baseband_signal sig = ofdm_modulate(grid, cfg);
        const double expected = 1.0 / std::sqrt(static_cast<double>(cfg.fft_size));
        for (int n = 0; n < cfg.fft_size; ++n)
        {
            const double mag = std::abs(sig.samples[cfg.cp_lengths[0] + n]);
            CHECK(std::abs(mag - expected) < 1e-12);
        }
    }

    SECTION("generated SRS signal is half-FFT periodic inside the symbol body")
    {
        // comb-2 occupancy puts energy on even bins only
        const baseband_signal sig = make_reference_slot(cfg);
        const int half = cfg.fft_size / 2;
        for (int sym = 0; sym < 4; ++sym)
        {
            size_t start = 0;
            for (int s = 0; s < sym; ++s)
                start += cfg.cp_lengths[s] + cfg.fft_size;
            start += cfg.cp_lengths[sym];
            for (int n = 0; n < half; ++n)
                CHECK(std::abs(sig.samples[start + n] - sig.samples[start + n + half]) < 1e-9);
        }
    }

    SECTION("identical configurations give bit-identical waveforms")
    {
        const baseband_signal a = make_reference_slot(cfg);
        const baseband_signal b = make_reference_slot(make_waveform_config("I"));
        CHECK(std::memcmp(a.samples.data(), b.samples.data(),
                          a.samples.size() * sizeof(cpx)) == 0);
    }
}

TEST_CASE("ofdm roundtrip and energy over all analyzed configurations")
{
    rng_stream rng(123);
    for (const char *id : {"I", "II", "III"})
    {
        const waveform_config cfg = make_waveform_config(id);

        resource_grid grid(cfg.symbols_per_slot, cfg.n_subcarriers);
        for (auto &v : grid.data)
            v = rng.complex_normal(1.0);

        const baseband_signal sig = ofdm_modulate(grid, cfg);

        // cyclic prefixes replicate body samples, so energy is compared on
        // the symbol bodies (the transform itself is unitary)
        double body_energy = 0.0;
        size_t pos = 0;
        for (int sym = 0; sym < cfg.symbols_per_slot; ++sym)
        {
            pos += cfg.cp_lengths[sym];
            for (int n = 0; n < cfg.fft_size; ++n)
                body_energy += std::norm(sig.samples[pos + n]);
            pos += cfg.fft_size;
        }
        double grid_energy = 0.0;
        for (const auto &v : grid.data)
            grid_energy += std::norm(v);
        CHECK(std::abs(body_energy - grid_energy) < 1e-9 * grid_energy);

        const resource_grid back = ofdm_demodulate(sig, cfg, 0);
        double max_err = 0.0;
        for (size_t i = 0; i < grid.data.size(); ++i)
            max_err = std::max(max_err, std::abs(grid.data[i] - back.data[i]));
        CHECK(max_err < 1e-9);
    }
}

TEST_CASE("ofdm roundtrip at nonzero offsets")
{
    const waveform_config cfg = make_waveform_config("I");
    const cvec pilots = generate_srs_sequence(cfg, 25, 0.0);
    const resource_grid grid = map_to_grid(pilots, cfg);
    const baseband_signal slot = ofdm_modulate(grid, cfg);

    baseband_signal three;
    three.sample_rate = slot.sample_rate;
    for (int i = 0; i < 3; ++i)
        three.samples.insert(three.samples.end(), slot.samples.begin(), slot.samples.end());

    for (const size_t offset : {size_t{0}, static_cast<size_t>(cfg.slot_samples()),
                                static_cast<size_t>(2 * cfg.slot_samples())})
    {
        const resource_grid back = ofdm_demodulate(three, cfg, offset);
        const cmatrix extracted = extract_srs_symbols(back, cfg);
        for (size_t s = 0; s < 4; ++s)
            for (int k = 0; k < cfg.pilot_count(); ++k)
                CHECK(std::abs(extracted(s, k) - pilots[k]) < 1e-9);
    }

    CHECK_THROWS_AS(ofdm_demodulate(slot, cfg, 1), std::invalid_argument);
}

TEST_CASE("extract_srs_symbols handles the degenerate grids")
{
    const waveform_config cfg = make_waveform_config("I");
    const cmatrix zero = extract_srs_symbols(resource_grid(14, cfg.n_subcarriers), cfg);
    for (const auto &v : zero.data)
        CHECK(v == cpx(0.0, 0.0));

    CHECK_THROWS_AS(extract_srs_symbols(resource_grid(3, cfg.n_subcarriers), cfg),
                    std::invalid_argument);
}
