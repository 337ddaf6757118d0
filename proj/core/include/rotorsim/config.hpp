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
 * @file config.hpp
 * @brief Run configuration: YAML parsing with unit-suffixed keys, the built-in
 *        presets and sweep expansion.
 *
 * Every numeric key carries its unit in the name (rotation_rate_rpm,
 * blade_length_cm, symbol_duration_us, ...). Values are converted to SI at
 * parse time. Unknown keys are errors. All problems found in a file are
 * reported together.
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "rotorsim/dsp.hpp"

namespace rotorsim {

class ConfigError : public std::runtime_error
{
public:
    explicit ConfigError(std::vector<std::string> issues);
    [[nodiscard]] const std::vector<std::string>& issues() const { return issues_; }

private:
    std::vector<std::string> issues_;
};

/// Tx/Rx placement. Either the equal-zenith form (bistatic angle + zenith),
/// which sweeps can vary, or explicit angles.
struct GeometrySpec
{
    double tx_range{};
    double rx_range{};
    double zenith{kPi / 2};
    std::optional<double> bistatic_angle;  ///< set for the equal-zenith form
    double tx_azimuth{};
    double rx_zenith{kPi / 2};  ///< explicit form only
    double rx_azimuth{};        ///< explicit form only

    [[nodiscard]] BistaticGeometry build(std::optional<double> beta_override = std::nullopt) const;
};

struct DspOptions
{
    std::size_t subsample{8};
    Window window{Window::rectangular};       ///< exported spectra and spread
    Window spacing_window{Window::hann};      ///< impulse-spacing estimate
    std::optional<std::size_t> range_bin;     ///< unset: each rotor's hub cell
    double peak_threshold_db{10.0};
    double floor_margin_db{6.0};
    std::size_t smoothing_bins{9};
};

enum class OutputFormat
{
    binary,
    csv,
};

OutputFormat parse_output_format(const std::string& name);
std::string to_string(OutputFormat f);

struct OutputOptions
{
    std::filesystem::path directory{"rotorsim_out"};
    OutputFormat format{OutputFormat::binary};
    bool spectrum{true};
    bool map{false};
    bool frames{false};
    /// Inclusive range-cell span of the map; unset covers the scene +-8 cells.
    std::optional<std::pair<std::size_t, std::size_t>> map_bins;
};

/// Lists to sweep over. An empty list leaves the base value in place.
struct SweepSpec
{
    std::vector<double> bistatic_angle;  ///< [rad]
    std::vector<double> rotation_rate;   ///< [rad/s], applied to every rotor
    std::vector<int> blades;             ///< applied to every rotor
    std::vector<double> snr_db;

    [[nodiscard]] std::size_t size() const;
};

struct RunConfig
{
    std::string name{"run"};
    OfdmConfig ofdm;
    GeometrySpec geometry;
    Scene scene;
    DspOptions dsp;
    OutputOptions output;
    SweepSpec sweep;
    TimeMode mode{TimeMode::exact};
    std::uint64_t seed{1};
    /// Modulation grid file (binary payload); empty selects the Newman grid.
    std::filesystem::path grid_file;

    /// Throws ConfigError listing every violation.
    void validate() const;
};

/// One expanded sweep point with its labels.
struct RunPoint
{
    std::size_t index{};
    BistaticGeometry geometry;
    Scene scene;
    double bistatic_angle_deg{};
    double rotation_rate_rpm{};  ///< first rotor, 0 without rotors
    int blades{};                ///< first rotor, 0 without rotors
    double snr_db{};             ///< +inf without noise
    std::uint64_t seed{};

    [[nodiscard]] std::string label() const;
};

std::vector<std::string> preset_names();
/// YAML text of a built-in preset; throws ConfigError for an unknown name.
std::string preset_yaml(const std::string& name);

RunConfig preset_config(const std::string& name);
/// Parses YAML text. A top-level `preset:` key loads that preset first and
/// overlays the remaining keys on it (maps merge, lists and scalars replace).
RunConfig parse_config(const std::string& text, const std::string& source = "<string>");
RunConfig load_config(const std::filesystem::path& path);

/// Noise power relative to the reference for a given SNR.
double noise_power_from_snr(double snr_db);

/// Per-point noise seed derived from the run seed and the point index.
std::uint64_t point_seed(std::uint64_t run_seed, std::size_t index);

/// Cartesian expansion of the sweep; one point when nothing is swept.
std::vector<RunPoint> expand_sweep(const RunConfig& cfg);

/// The modulation grid selected by the config (Newman unless a grid file is set).
ModulationGrid load_grid(const RunConfig& cfg);

}  // namespace rotorsim
