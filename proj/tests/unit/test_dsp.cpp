// SPDX-License-Identifier: Apache-2.0
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


#include <doctest.h>

#include <map>
#include <random>

#include "oracles.hpp"

using namespace rotorsim;

namespace {

// Sum of unit complex exponentials plus optional white noise.
SlowTimeSignal tones(std::span<const double> freqs, double rate, std::size_t length, double noise = 0.0,
                     std::uint64_t seed = 1)
{
    SlowTimeSignal s;
    s.slow_time_rate = rate;
    s.samples.assign(length, Complex{});
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> normal(0.0, std::sqrt(noise / 2.0));
    for (std::size_t i = 0; i < length; ++i) {
        const double t = static_cast<double>(i) / rate;
        for (const double f : freqs)
            s.samples[i] += std::polar(1.0, 2.0 * kPi * f * t);
        if (noise > 0.0)
            s.samples[i] += Complex(normal(gen), normal(gen));
    }
    return s;
}

FrameSet rotor_frames(const OfdmConfig& cfg, double beta_deg, double noise_power, std::uint64_t seed,
                      std::size_t stride, int blades = 2, double rpm = 1500, bool with_static = false)
{
    Scene s;
    Propeller p;
    p.n_blades = blades;
    p.blade_length = 0.1655;
    p.rotation_rate = rpm2rad_s(rpm);
    p.rcs_density = 0.01;
    s.propellers.push_back(p);
    if (with_static)
        s.static_scatterers.push_back({{0, 0, 0}, 0.01});
    s.noise_power = noise_power;
    s.rng_seed = seed;
    const auto geom = BistaticGeometry::from_bistatic_angle(2.625, 2.625, kPi / 2, deg2rad(beta_deg));
    SimulationOptions opt;
    opt.symbol_stride = stride;
    return simulate_scene(s, geom, cfg, newman_grid(cfg), opt);
}

// Setup 1 numerology at reduced length.
OfdmConfig setup1(std::size_t symbols)
{
    return OfdmConfig::centered(3.7e9 - 1600 / (2 * 8e-6), 1600, 1280, 8e-6, symbols);
}

}  // namespace

TEST_SUITE("dsp")
{
    TEST_CASE("a tone lands within one bin of its frequency")
    {
        for (const double f : {0.0, 123.4, -987.6, 1500.2}) {
            const double freqs[] = {f};
            const auto spec = doppler_spectrum(tones(freqs, 7812.5, 2048), Window::hann);
            const auto it = std::max_element(spec.magnitude.begin(), spec.magnitude.end());
            const auto k = static_cast<std::size_t>(it - spec.magnitude.begin());
            CHECK(std::abs(spec.frequency(k) - f) <= spec.bin_width);
        }
    }

    TEST_CASE("spectrum axis is centered on zero Doppler")
    {
        const double freqs[] = {0.0};
        const auto spec = doppler_spectrum(tones(freqs, 1000.0, 64));
        CHECK(spec.size() == 64);
        CHECK(spec.zero_bin() == 32);
        CHECK(spec.frequency(spec.zero_bin()) == doctest::Approx(0.0));
        CHECK(spec.bin_width == doctest::Approx(1000.0 / 64));
        CHECK(spec.magnitude[32] == doctest::Approx(64.0));
        // Odd length: zero bin is still the DC bin.
        const auto odd = doppler_spectrum(tones(freqs, 1000.0, 63));
        CHECK(odd.frequency(odd.zero_bin()) == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(odd.magnitude[odd.zero_bin()] == doctest::Approx(63.0));
    }

    TEST_CASE("spectrum matches a direct DFT and satisfies Parseval")
    {
        const double freqs[] = {37.0, -211.0, 400.5};
        const auto sig = tones(freqs, 2000.0, 250, 0.3, 9);
        const auto spec = doppler_spectrum(sig);
        const auto direct = oracle::centered_dft_magnitude(sig.samples);
        REQUIRE(direct.size() == spec.size());
        double energy_t = 0.0;
        double energy_f = 0.0;
        for (std::size_t k = 0; k < spec.size(); ++k) {
            CHECK(spec.magnitude[k] == doctest::Approx(direct[k]).epsilon(1e-9));
            energy_f += spec.magnitude[k] * spec.magnitude[k];
        }
        for (const auto& v : sig.samples)
            energy_t += std::norm(v);
        CHECK(energy_f == doctest::Approx(energy_t * static_cast<double>(sig.samples.size())).epsilon(1e-10));
    }

    TEST_CASE("window parsing")
    {
        CHECK(parse_window("hann") == Window::hann);
        CHECK(parse_window("rectangular") == Window::rectangular);
        CHECK(to_string(Window::hann) == "hann");
        CHECK_THROWS_AS(parse_window("kaiser"), std::invalid_argument);
    }

    TEST_CASE("slow-time extraction")
    {
        const auto cfg = setup1(64);
        const auto full = rotor_frames(cfg, 30, 0.0, 1, 1);
        const auto s1 = slow_time_extract(full, 4, 1);
        CHECK(s1.samples.size() == 64);
        CHECK(s1.slow_time_rate == doctest::Approx(125000.0));
        CHECK(s1.range_bin == 4);
        for (std::size_t m = 0; m < 64; ++m)
            CHECK(s1.samples[m] == full.frames[m].samples[4]);

        const auto s8 = slow_time_extract(full, 4, 8);
        CHECK(s8.samples.size() == 8);
        CHECK(s8.slow_time_rate == doctest::Approx(125000.0 / 8));
        CHECK(s8.samples[3] == full.frames[24].samples[4]);

        // Frames simulated at stride 8 feed the same slow-time samples.
        const auto strided = rotor_frames(cfg, 30, 0.0, 1, 8);
        CHECK(slow_time_extract(strided, 4, 8).samples == s8.samples);
        CHECK_THROWS_AS(slow_time_extract(strided, 4, 4), std::invalid_argument);
        CHECK_THROWS_AS(slow_time_extract(full, 4, 0), std::invalid_argument);
        CHECK_THROWS_AS(slow_time_extract(full, 1600, 1), std::out_of_range);
    }

    TEST_CASE("16384 symbols subsampled by 8 give 2048 samples and an 8x narrower span")
    {
        const auto cfg = setup1(16384);
        const auto fs = rotor_frames(cfg, 30, 0.0, 1, 8);
        const auto coarse = doppler_spectrum(slow_time_extract(fs, 4, 8));
        CHECK(coarse.size() == 2048);
        const double span_full = 1.0 / cfg.symbol_duration;
        const double span_sub = coarse.bin_width * static_cast<double>(coarse.size());
        CHECK(span_full / span_sub == doctest::Approx(8.0));
        CHECK(coarse.bin_width == doctest::Approx(15625.0 / 2048));
    }

    TEST_CASE("impulse spacing of synthetic line spectra")
    {
        std::vector<double> lines;
        for (int k = -8; k <= 8; ++k)
            lines.push_back(40.0 * k + 3.0);
        const auto spec = doppler_spectrum(tones(lines, 2000.0, 4096, 0.5, 3), Window::hann);
        CHECK(impulse_spacing(spec) == doctest::Approx(40.0).epsilon(0.01));
        CHECK(impulse_spacing(spec, 20.0) == doctest::Approx(40.0).epsilon(0.01));
        // At 10 dB a handful of noise bins clear the threshold; the median
        // gap ignores them. At 30 dB only the lines remain.
        const auto clean = doppler_spectrum(tones(lines, 2000.0, 4096, 0.005, 3), Window::hann);
        const auto peaks = detect_peaks(clean, PeakOptions{30.0, 2});
        CHECK(peaks.size() == lines.size());
        for (std::size_t i = 0; i < peaks.size() && i < lines.size(); ++i)
            CHECK(std::abs(peaks[i].frequency - lines[i]) < 0.25 * clean.bin_width);

        const double two[] = {100.0, 300.0};
        const auto sparse = doppler_spectrum(tones(two, 2000.0, 4096, 0.005, 3), Window::hann);
        CHECK(detect_peaks(sparse, PeakOptions{30.0, 2}).size() == 2);
        CHECK_THROWS_AS(impulse_spacing(sparse, 30.0), MetricError);
        const double none[] = {0.0};
        auto flat = doppler_spectrum(tones(none, 2000.0, 4096, 1.0, 4));
        CHECK_THROWS_AS(impulse_spacing(flat, 40.0), MetricError);
    }

    TEST_CASE("peaks closer than the minimum separation merge")
    {
        DopplerSpectrum spec;
        spec.bin_width = 1.0;
        spec.first_frequency = -16;
        spec.magnitude.assign(32, 1.0);
        spec.magnitude[10] = 100.0;
        spec.magnitude[11] = 50.0;
        spec.magnitude[12] = 90.0;
        spec.magnitude[20] = 80.0;
        // Bins 10 and 12 are two apart: kept at the default separation.
        CHECK(detect_peaks(spec).size() == 3);
        PeakOptions wide;
        wide.min_separation = 3;
        const auto peaks = detect_peaks(spec, wide);
        REQUIRE(peaks.size() == 2);
        CHECK(peaks[0].bin == 10);
        CHECK(peaks[1].bin == 20);
    }

    TEST_CASE("rotor line spacing is blades x rotation frequency")
    {
        const auto cfg = OfdmConfig::centered(3.6e9, 160, 128, 8e-6, 131072);
        for (const int blades : {1, 2, 3, 4}) {
            for (const double f_rot : {10.0, 25.0, 100.0 / 3.0}) {
                CAPTURE(blades);
                CAPTURE(f_rot);
                const auto fs = rotor_frames(cfg, 30, 1e-4, 17, 16, blades, 60.0 * f_rot);
                const auto cell = range_cell(cfg, 2 * 2.625);
                const auto spec = doppler_spectrum(slow_time_extract(fs, cell, 16), Window::hann);
                const double expected = blades * f_rot;
                CHECK(std::abs(impulse_spacing(spec) - expected) <= spec.bin_width);
            }
        }
    }

    TEST_CASE("predicted bistatic Doppler")
    {
        const double lambda = kSpeedOfLight / 3.7e9;
        const double v = rpm2rad_s(1500) * 0.1655;
        CHECK(predict_bistatic_doppler(v, deg2rad(60), 0.0, lambda) == doctest::Approx(555.4).epsilon(1e-3));
        CHECK(std::abs(predict_bistatic_doppler(v, kPi, 0.0, lambda)) < 1e-9);
        CHECK(std::abs(predict_bistatic_doppler(v, deg2rad(30), kPi / 2, lambda)) < 1e-9);
        CHECK(predict_bistatic_doppler(v, 0.0, 0.0, lambda) ==
              doctest::Approx(oracle::bistatic_doppler(v, 0.0, 0.0, lambda)));
        CHECK_THROWS_AS(predict_bistatic_doppler(v, 0.0, 0.0, 0.0), std::invalid_argument);
    }

    TEST_CASE("support of a pure zero-Doppler line is one bin")
    {
        const double dc[] = {0.0};
        const auto spec = doppler_spectrum(tones(dc, 1000.0, 1024, 1e-3, 5));
        const auto sup = doppler_support(spec);
        CHECK(sup.lower_bin == spec.zero_bin());
        CHECK(sup.upper_bin == spec.zero_bin());
        CHECK(sup.edge() == doctest::Approx(0.0));
        CHECK(doppler_spread(spec) == doctest::Approx(spec.bin_width));
    }

    TEST_CASE("support of a flat band recovers its edges")
    {
        std::vector<double> lines;
        for (int k = -60; k <= 60; ++k)
            lines.push_back(5.0 * k);
        const auto spec = doppler_spectrum(tones(lines, 2000.0, 2000, 0.5, 6));
        const auto sup = doppler_support(spec);
        CHECK(std::abs(sup.upper_edge - 300.0) <= 10.0);
        CHECK(std::abs(sup.lower_edge + 300.0) <= 10.0);
        CHECK(sup.width == doctest::Approx(sup.upper_edge - sup.lower_edge + spec.bin_width));
        CHECK(sup.threshold > sup.noise_floor);
    }

    TEST_CASE("rotor spectra: spread ordering, bound and symmetry")
    {
        const auto cfg = setup1(16384);
        const double lambda = kSpeedOfLight / 3.7e9;
        const double v = rpm2rad_s(1500) * 0.1655;
        std::map<int, double> spread;
        for (const int beta : {30, 60, 120, 180}) {
            const auto fs = rotor_frames(cfg, beta, 1e-3, 7, 8, 2, 1500, true);
            const auto spec = doppler_spectrum(slow_time_extract(fs, 4, 8));
            const auto sup = doppler_support(spec);
            spread[beta] = sup.width;
            if (beta == 30 || beta == 60) {
                const double f_d = predict_bistatic_doppler(v, deg2rad(beta), 0.0, lambda);
                CHECK(sup.width <= 2.0 * f_d * 1.1);
                // The rotor spectrum is symmetric about zero Doppler.
                // Edges sit on discrete lines, so they may differ by one line.
                CHECK(std::abs(sup.upper_edge + sup.lower_edge) <= 50.0 + spec.bin_width);
                const double ratio = sup.upper_edge / f_d;
                CHECK(ratio == doctest::Approx(1.0).epsilon(0.1));
            }
        }
        CHECK(spread[30] > spread[60]);
        CHECK(spread[60] > spread[120]);
        CHECK(spread[120] > spread[180]);
    }

    TEST_CASE("Pearson correlation")
    {
        const std::vector<double> a{1, 2, 3, 4, 5, 7};
        std::vector<double> neg;
        std::vector<double> affine;
        for (const double x : a) {
            neg.push_back(-x);
            affine.push_back(3.5 * x - 2.0);
        }
        CHECK(pearson_correlation(a, a) == doctest::Approx(1.0));
        CHECK(pearson_correlation(a, neg) == doctest::Approx(-1.0));
        CHECK(pearson_correlation(a, affine) == doctest::Approx(1.0));
        const std::vector<double> b{2, 1, 4, 3, 6, 5};
        CHECK(pearson_correlation(a, b) == doctest::Approx(oracle::pearson(a, b)).epsilon(1e-12));
        CHECK_THROWS_AS(pearson_correlation(a, std::vector<double>{1, 2}), std::invalid_argument);
        CHECK_THROWS_AS(pearson_correlation(std::vector<double>{1}, std::vector<double>{1}), std::invalid_argument);
        CHECK_THROWS_AS(pearson_correlation(a, std::vector<double>(6, 2.0)), std::invalid_argument);
    }

    TEST_CASE("signatures from different noise seeds correlate")
    {
        const auto cfg = setup1(4096);
        const auto a = doppler_spectrum(slow_time_extract(rotor_frames(cfg, 30, 1e-3, 1, 8, 2, 1500, true), 4, 8));
        const auto b = doppler_spectrum(slow_time_extract(rotor_frames(cfg, 30, 1e-3, 2, 8, 2, 1500, true), 4, 8));
        CHECK(pearson_correlation(a, b) > 0.95);
    }

    TEST_CASE("range-Doppler map of a static scatterer")
    {
        const auto cfg = setup1(64);
        Scene s;
        s.static_scatterers.push_back({{0, 0, 0}, 0.01});
        const auto geom = BistaticGeometry::from_bistatic_angle(2.625, 2.625, kPi / 2, deg2rad(30));
        const auto fs = simulate_scene(s, geom, cfg, newman_grid(cfg));
        const auto map = range_doppler_map(fs, 1, Window::rectangular, 1, 10);
        CHECK(map.first_range_bin == 1);
        CHECK(map.n_range == 10);
        CHECK(map.n_doppler == 64);
        CHECK(map.range_resolution == doctest::Approx(kSpeedOfLight / (2 * 200e6)));
        std::size_t best_row = 0;
        for (std::size_t r = 0; r < map.n_range; ++r)
            if (map.at(r, map.zero_bin()) > map.at(best_row, map.zero_bin()))
                best_row = r;
        CHECK(best_row + map.first_range_bin == 4);
        // Cell 4 covers monostatic ranges [2.25, 3.0) m.
        CHECK(map.range_of_bin(4) == doctest::Approx(2.625).epsilon(2e-3));
        const auto row = map.row(4);
        CHECK(row.magnitude == doppler_spectrum(slow_time_extract(fs, 4, 1)).magnitude);
        CHECK_THROWS_AS(static_cast<void>(map.row(11)), std::out_of_range);
        CHECK_THROWS(range_doppler_map(fs, 1, Window::rectangular, 8, 4));

        const auto setup2 = OfdmConfig::centered(7e9, 2500, 2048, 1.02e-6, 4);
        CHECK(setup2.range_resolution() == doctest::Approx(0.0612).epsilon(2e-3));
    }
}
