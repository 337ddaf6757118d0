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
 * @file batch.hpp
 * @brief Batch dataset generation: simulate every sweep point, compute the
 *        micro-Doppler metrics, write payload files and a hashed manifest.
 */

#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rotorsim/config.hpp"

namespace rotorsim {

/// Metrics of the Doppler spectrum of one range cell.
struct SpectrumMetrics
{
    std::size_t range_bin{};
    std::optional<std::size_t> propeller;     ///< rotor whose hub sits in this cell
    std::optional<double> impulse_spacing;    ///< [Hz]; unset when too few lines
    std::string spacing_note;                 ///< why the spacing is unset
    double spread{};                          ///< support width [Hz]
    double edge{};                            ///< largest |f| of the support [Hz]
    std::optional<double> expected_spacing;   ///< N_B f_rot [Hz]
    std::optional<double> predicted_doppler;  ///< tip Doppler for the rotor's geometry [Hz]
};

struct PayloadFile
{
    std::string kind;                ///< spectrum, map or frames
    std::filesystem::path path;      ///< relative to the output directory
    std::string sha256;
    std::uintmax_t bytes{};
};

struct SignatureRecord
{
    RunPoint point;
    bool ok{false};
    std::string error;
    std::vector<SpectrumMetrics> metrics;
    std::vector<PayloadFile> files;
};

/// In-memory products of one sweep point.
struct PointProducts
{
    FrameSet frames;
    std::vector<DopplerSpectrum> spectra;  ///< one per metrics entry, cfg.dsp.window
    std::vector<SpectrumMetrics> metrics;
    std::optional<RangeDopplerMap> map;
};

struct BatchOptions
{
    /// Run only the base point, ignoring the sweep lists.
    bool single{false};
    /// Called after each point, in order.
    std::function<void(const SignatureRecord&)> progress;
};

struct BatchResult
{
    std::vector<SignatureRecord> records;
    std::filesystem::path manifest;

    [[nodiscard]] bool all_ok() const;
};

/// Range cells analyzed for a point: the configured bin, or each rotor's hub
/// cell (the first static scatterer's cell without rotors).
std::vector<std::pair<std::size_t, std::optional<std::size_t>>> analysis_bins(const RunConfig& cfg,
                                                                             const RunPoint& point);

/// Inclusive range-cell span covering every scatterer of the point, +-8 cells.
std::pair<std::size_t, std::size_t> scene_cell_span(const RunConfig& cfg, const RunPoint& point);

PointProducts simulate_point(const RunConfig& cfg, const RunPoint& point, const ModulationGrid& grid,
                             bool with_map);

/// Simulates every point and writes payloads plus manifest.json into
/// cfg.output.directory. A failing point is recorded and the batch goes on;
/// directory creation or manifest write failures throw.
BatchResult run_batch(const RunConfig& cfg, const BatchOptions& options = {});

/// Re-hashes every file listed in a manifest. Returns the problems found.
std::vector<std::string> verify_manifest(const std::filesystem::path& manifest);

}  // namespace rotorsim
