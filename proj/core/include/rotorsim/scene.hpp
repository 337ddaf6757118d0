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

/**
 * @file scene.hpp
 * @brief Multi-rotor drone scenes: rotors, static body scatterers and noise.
 */

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rotorsim/scatter_model.hpp"

namespace rotorsim {

struct StaticScatterer
{
    Vec3 position{};  ///< relative to the scene origin [m]
    double rcs{};     ///< [m^2]
};

struct Scene
{
    std::vector<Propeller> propellers;
    std::vector<StaticScatterer> static_scatterers;
    /// Noise variance relative to the reference power (see noise_reference_power()).
    double noise_power{0.0};
    std::uint64_t rng_seed{0};
    double tx_amplitude{1.0};

    /// Throws std::invalid_argument on an empty scene, negative noise power,
    /// or a rotor/scatterer offset that is not small against the Tx/Rx ranges.
    void validate(const BistaticGeometry& geom) const;

    /// 10 log10(1 / noise_power); +inf without noise.
    [[nodiscard]] double snr_db() const;
};

/// Which symbols to synthesize. Frames are produced for
/// m = first_symbol, first_symbol + stride, ... < M.
struct SimulationOptions
{
    std::size_t first_symbol{0};
    std::size_t symbol_stride{1};
    TimeMode mode{TimeMode::exact};
};

/// Simulated frames plus the numerology they were produced with.
struct FrameSet
{
    OfdmConfig ofdm;
    std::size_t symbol_stride{1};
    std::vector<EchoFrame> frames;
};

/// Rotor context with the Tx/Rx ranges and angles re-derived about the hub.
RotorEcho rotor_echo_in_scene(const Propeller& prop, const BistaticGeometry& geom, double tx_amplitude = 1.0);

/// Noise-free static-body return, identical for every symbol of a repeated grid.
EchoFrame static_returns(const Scene& scene, const BistaticGeometry& geom, const OfdmConfig& cfg,
                         const ModulationGrid& grid, std::size_t symbol);

/// Reference power for Scene::noise_power: the peak sample power of the
/// aggregate static return. Without static returns, each rotor is collapsed
/// onto its hub (full blades at R_O) instead; 1.0 if that is zero too.
double noise_reference_power(const Scene& scene, const BistaticGeometry& geom, const OfdmConfig& cfg,
                             const ModulationGrid& grid);

/// Adds circularly-symmetric complex Gaussian noise of variance `noise_power`.
/// Each frame draws from a generator keyed by (seed, symbol_index), so the
/// result does not depend on which frames are present or their order.
void inject_noise(std::span<EchoFrame> frames, double noise_power, std::uint64_t seed);

/// Coherent sum of rotor and static returns plus noise.
FrameSet simulate_scene(const Scene& scene, const BistaticGeometry& geom, const OfdmConfig& cfg,
                        const ModulationGrid& grid, const SimulationOptions& options = {});

}  // namespace rotorsim
