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
 * @file scatter_model.hpp
 * @brief Rotor echo models.
 *
 * Three evaluators of the baseband return of a rotating propeller:
 *  - closed_form_returns(): blades as continuous lines of scatterers, each
 *    blade's portion inside a fast-time range cell integrated analytically
 *    (phase at the segment center times a sinc of its half-extent);
 *  - point_oracle_returns(): the same blades discretized into K points per
 *    blade and summed coherently, cell by cell;
 *  - classic_cw_returns(): the narrowband monostatic CW rotor signature.
 *
 * Range gating uses one fast-time sample per cell: cell mu holds bistatic
 * ranges in [(mu - 1) cT/N, mu cT/N).
 *
 * Amplitudes: a blade is a line with RCS per unit length rcs_density. The
 * per-length amplitude g(f) follows the radar equation with sigma = rcs_density
 * x 1 m, so a segment [l1, l2] integrates to g * (l2 - l1) * sinc(...). The
 * closed form is written with a (l2 - l1)/2 prefactor, so its per-blade
 * amplitude gamma is 2 g.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rotorsim/geometry.hpp"
#include "rotorsim/waveform.hpp"

namespace rotorsim {

struct Propeller
{
    int n_blades{2};
    double blade_length{};     ///< L_B [m]
    double rotation_rate{};    ///< omega [rad/s], signed
    double initial_phase{};    ///< rotor angle of blade 1 at t = 0 [rad]
    Vec3 hub_offset{};         ///< hub position relative to the scene origin [m]
    double rcs_density{};      ///< [m^2 / m]

    void validate() const;

    /// Rotation frequency |omega| / 2pi [Hz].
    [[nodiscard]] double rotation_frequency() const { return std::abs(rotation_rate) / kTwoPi; }
    [[nodiscard]] double tip_speed() const { return std::abs(rotation_rate) * blade_length; }
    /// phi_B(i) = phi_B + phi_0 + 2 pi (i - 1) / N_B for blade i = 1..N_B.
    [[nodiscard]] double blade_phase(const BistaticFactors& factors, int blade) const;
};

using EchoFrame = FastTimeFrame;

/// How the rotor angle is sampled inside a symbol.
enum class TimeMode
{
    exact,   ///< t = m T + (mu / N) T per sample
    frozen,  ///< t = m T for the whole symbol
};

/// Radar-equation amplitude gamma_0 sqrt(c sigma / (4 pi^3 R^4 f^2)).
/// Throws std::invalid_argument for range <= 0, frequency <= 0 or sigma < 0.
double radar_amplitude(double sigma, double range, double frequency, double tx_amplitude = 1.0);

/// Bistatic form with R^4 replaced by R_T^2 R_R^2.
double bistatic_radar_amplitude(double sigma, double tx_range, double rx_range, double frequency,
                                double tx_amplitude = 1.0);

/// Portion of blade `blade` inside range cell mu at time t.
struct BladeLimits
{
    double inner{};  ///< l1 [m]
    double outer{};  ///< l2 [m]

    [[nodiscard]] double width() const { return outer - inner; }
};

/// l1 = median{0, a, b}, l2 = median{L_B, a, b} where a and b are the radii
/// at which the blade crosses the two edges of cell mu. Results are clamped to
/// [0, L_B]; a cell that misses the blade yields l1 == l2. When
/// |A_B cos(omega t + phi_B(i))| < 1e-9 the blade is range-degenerate and the
/// whole blade is in cell mu iff R_O is.
BladeLimits blade_limits(std::size_t mu, int blade, const BistaticFactors& factors, const Propeller& prop,
                         const OfdmConfig& cfg, double t);

/// Everything needed to evaluate one rotor's echo.
struct RotorEcho
{
    Propeller propeller;
    BistaticFactors factors;
    double tx_range{};
    double rx_range{};
    double tx_amplitude{1.0};
};

/// Rotor echo context for a geometry defined about the rotor hub.
RotorEcho make_rotor_echo(const Propeller& prop, const BistaticGeometry& geom_about_hub, double tx_amplitude = 1.0);

/// Per-length line amplitude g(f_n) for every subcarrier, indexed n - 1.
std::vector<double> line_amplitudes(const RotorEcho& rotor, const OfdmConfig& cfg);

/// Closed-form rotor echo of symbol m (noise free).
EchoFrame closed_form_returns(const RotorEcho& rotor, const OfdmConfig& cfg, const ModulationGrid& grid,
                              std::size_t symbol, TimeMode mode = TimeMode::exact);

/// Adds the closed-form rotor echo of `symbol` into `frame` (length N). Only
/// the cells the blades touch are written.
void accumulate_closed_form(const RotorEcho& rotor, std::span<const double> amplitudes, const OfdmConfig& cfg,
                            const ModulationGrid& grid, std::size_t symbol, TimeMode mode,
                            std::span<Complex> frame);

/// Coherent sum over `points_per_blade` midpoint samples of every blade.
EchoFrame point_oracle_returns(std::size_t points_per_blade, const RotorEcho& rotor, const OfdmConfig& cfg,
                               const ModulationGrid& grid, std::size_t symbol, TimeMode mode = TimeMode::exact);

/// Narrowband monostatic CW rotor signature at the given slow times.
///
/// `elevation` is the radar elevation above the rotation plane and
/// `monostatic_range` the one-way range to the hub. Blade phases follow
/// phi_0 + 2 pi (i - 1) / N_B. The per-blade amplitude is 2 g(f_0) with the
/// leading length L_B / 2, matching closed_form_returns() in the monostatic
/// narrowband limit.
std::vector<Complex> classic_cw_returns(const Propeller& prop, double elevation, double monostatic_range,
                                        double frequency, std::span<const double> times,
                                        double tx_amplitude = 1.0);

}  // namespace rotorsim
