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

#include "rotorsim/scene.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>

#include "rotorsim/parallel.hpp"

namespace rotorsim {

namespace {

// Offsets beyond this fraction of the shorter antenna range break the
// far-field assumption behind the rotating-point range.
constexpr double kFarFieldRatio = 0.25;

Complex point_sum(const OfdmConfig& cfg, std::span<const Complex> column, std::span<const double> amplitudes,
                  std::size_t mu, double range)
{
    Complex acc{};
    for (std::size_t n = cfg.active_first; n <= cfg.active_last(); ++n) {
        const std::size_t r = (n * mu) % cfg.n_subcarriers;
        const double fast = kTwoPi * static_cast<double>(r) / static_cast<double>(cfg.n_subcarriers);
        const double k = kTwoPi * cfg.subcarrier_frequency(n) / kSpeedOfLight;
        acc += column[n - 1] * amplitudes[n - 1] * std::polar(1.0, fast - k * range);
    }
    return acc;
}

void check_in_frame(const OfdmConfig& cfg, double max_range, const std::string& what)
{
    if (range_cell(cfg, max_range) >= cfg.n_subcarriers)
        throw std::invalid_argument("simulate_scene: " + what + " lies beyond the last fast-time cell");
}

std::mt19937_64 symbol_generator(std::uint64_t seed, std::uint64_t symbol)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(symbol), static_cast<std::uint32_t>(symbol >> 32)};
    return std::mt19937_64(seq);
}

}  // namespace

void Scene::validate(const BistaticGeometry& geom) const
{
    geom.validate();
    if (propellers.empty() && static_scatterers.empty())
        throw std::invalid_argument("Scene: no propellers and no static scatterers");
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power))
        throw std::invalid_argument("Scene: noise_power must be >= 0");
    if (!(tx_amplitude >= 0.0))
        throw std::invalid_argument("Scene: tx_amplitude must be >= 0");

    const double limit = kFarFieldRatio * std::min(geom.tx_range, geom.rx_range);
    for (std::size_t i = 0; i < propellers.size(); ++i) {
        propellers[i].validate();
        if (propellers[i].hub_offset.norm() + propellers[i].blade_length > limit)
            throw std::invalid_argument("Scene: propeller " + std::to_string(i) +
                                        " extends too far from the origin for the far-field model");
    }
    for (std::size_t i = 0; i < static_scatterers.size(); ++i) {
        if (!(static_scatterers[i].rcs >= 0.0))
            throw std::invalid_argument("Scene: static scatterer " + std::to_string(i) + " has negative rcs");
        if (static_scatterers[i].position.norm() > limit)
            throw std::invalid_argument("Scene: static scatterer " + std::to_string(i) +
                                        " is too far from the origin for the far-field model");
    }
}

double Scene::snr_db() const
{
    if (noise_power <= 0.0)
        return std::numeric_limits<double>::infinity();
    return -10.0 * std::log10(noise_power);
}

RotorEcho rotor_echo_in_scene(const Propeller& prop, const BistaticGeometry& geom, double tx_amplitude)
{
    const BistaticGeometry about_hub =
        BistaticGeometry::from_positions(geom.tx_position(), geom.rx_position(), prop.hub_offset);
    return make_rotor_echo(prop, about_hub, tx_amplitude);
}

EchoFrame static_returns(const Scene& scene, const BistaticGeometry& geom, const OfdmConfig& cfg,
                         const ModulationGrid& grid, std::size_t symbol)
{
    EchoFrame frame;
    frame.symbol_index = symbol;
    frame.samples.assign(cfg.n_subcarriers, Complex{});
    const auto column = grid.column(symbol);
    const Vec3 tx = geom.tx_position();
    const Vec3 rx = geom.rx_position();
    std::vector<double> amps(cfg.n_subcarriers);
    for (const auto& s : scene.static_scatterers) {
        const double rt = (tx - s.position).norm();
        const double rr = (rx - s.position).norm();
        check_in_frame(cfg, rt + rr, "static scatterer");
        for (std::size_t n = 1; n <= cfg.n_subcarriers; ++n)
            amps[n - 1] = bistatic_radar_amplitude(s.rcs, rt, rr, cfg.subcarrier_frequency(n), scene.tx_amplitude);
        const std::size_t mu = range_cell(cfg, rt + rr);
        frame.samples[mu] += point_sum(cfg, column, amps, mu, rt + rr);
    }
    return frame;
}

double noise_reference_power(const Scene& scene, const BistaticGeometry& geom, const OfdmConfig& cfg,
                             const ModulationGrid& grid)
{
    auto peak = [](const EchoFrame& f) {
        double p = 0.0;
        for (const auto& s : f.samples)
            p = std::max(p, std::norm(s));
        return p;
    };

    if (!scene.static_scatterers.empty()) {
        const double p = peak(static_returns(scene, geom, cfg, grid, 0));
        if (p > 0.0)
            return p;
    }

    EchoFrame collapsed;
    collapsed.samples.assign(cfg.n_subcarriers, Complex{});
    const auto column = grid.column(0);
    for (const auto& prop : scene.propellers) {
        const RotorEcho rotor = rotor_echo_in_scene(prop, geom, scene.tx_amplitude);
        auto amps = line_amplitudes(rotor, cfg);
        for (auto& a : amps)
            a *= prop.blade_length * prop.n_blades;
        const std::size_t mu = range_cell(cfg, rotor.factors.total_range);
        if (mu < cfg.n_subcarriers)
            collapsed.samples[mu] += point_sum(cfg, column, amps, mu, rotor.factors.total_range);
    }
    const double p = peak(collapsed);
    return p > 0.0 ? p : 1.0;
}

void inject_noise(std::span<EchoFrame> frames, double noise_power, std::uint64_t seed)
{
    if (!(noise_power >= 0.0))
        throw std::invalid_argument("inject_noise: noise_power must be >= 0");
    if (noise_power == 0.0)
        return;
    const double sigma = std::sqrt(noise_power / 2.0);
    parallel_for(frames.size(), [&](std::size_t i) {
        auto gen = symbol_generator(seed, frames[i].symbol_index);
        std::normal_distribution<double> normal(0.0, sigma);
        for (auto& s : frames[i].samples) {
            const double re = normal(gen);
            const double im = normal(gen);
            s += Complex(re, im);
        }
    });
}

FrameSet simulate_scene(const Scene& scene, const BistaticGeometry& geom, const OfdmConfig& cfg,
                        const ModulationGrid& grid, const SimulationOptions& options)
{
    cfg.validate();
    scene.validate(geom);
    if (grid.n_subcarriers() != cfg.n_subcarriers || grid.n_symbols() < cfg.n_symbols)
        throw std::invalid_argument("simulate_scene: modulation grid does not match the OFDM config");
    if (options.symbol_stride == 0)
        throw std::invalid_argument("simulate_scene: symbol_stride must be >= 1");

    std::vector<RotorEcho> rotors;
    std::vector<std::vector<double>> amplitudes;
    for (const auto& prop : scene.propellers) {
        rotors.push_back(rotor_echo_in_scene(prop, geom, scene.tx_amplitude));
        const auto& f = rotors.back().factors;
        check_in_frame(cfg, f.total_range + f.amplitude * prop.blade_length, "propeller");
        amplitudes.push_back(line_amplitudes(rotors.back(), cfg));
    }

    FrameSet out;
    out.ofdm = cfg;
    out.symbol_stride = options.symbol_stride;
    for (std::size_t m = options.first_symbol; m < cfg.n_symbols; m += options.symbol_stride) {
        EchoFrame f;
        f.symbol_index = m;
        out.frames.push_back(std::move(f));
    }

    std::optional<EchoFrame> fixed_static;
    if (grid.is_repeated())
        fixed_static = static_returns(scene, geom, cfg, grid, 0);

    parallel_for(out.frames.size(), [&](std::size_t i) {
        EchoFrame& frame = out.frames[i];
        const std::size_t m = frame.symbol_index;
        frame.samples = fixed_static ? fixed_static->samples : static_returns(scene, geom, cfg, grid, m).samples;
        for (std::size_t r = 0; r < rotors.size(); ++r)
            accumulate_closed_form(rotors[r], amplitudes[r], cfg, grid, m, options.mode, frame.samples);
    });

    if (scene.noise_power > 0.0) {
        const double variance = scene.noise_power * noise_reference_power(scene, geom, cfg, grid);
        inject_noise(out.frames, variance, scene.rng_seed);
    }
    return out;
}

}  // namespace rotorsim
