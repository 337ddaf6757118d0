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
 * @file dsp.hpp
 * @brief Slow-time extraction, Doppler spectra, range-Doppler maps and the
 *        micro-Doppler metrics computed on them.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rotorsim/scene.hpp"

namespace rotorsim {

enum class Window
{
    rectangular,
    hann,
};

Window parse_window(const std::string& name);
std::string to_string(Window w);

/// Returns of one range cell across symbols.
struct SlowTimeSignal
{
    std::vector<Complex> samples;
    double slow_time_rate{};  ///< [Hz]
    std::size_t range_bin{};
};

/// Centered two-sided magnitude spectrum. Bin k is at
/// first_frequency + k * bin_width; the 0 Hz bin is size() / 2.
struct DopplerSpectrum
{
    std::vector<double> magnitude;
    double bin_width{};
    double first_frequency{};

    [[nodiscard]] std::size_t size() const { return magnitude.size(); }
    [[nodiscard]] std::size_t zero_bin() const { return magnitude.size() / 2; }
    [[nodiscard]] double frequency(std::size_t k) const { return first_frequency + static_cast<double>(k) * bin_width; }
};

/// Row-major magnitude, one row per range cell.
struct RangeDopplerMap
{
    std::size_t first_range_bin{};
    std::size_t n_range{};
    std::size_t n_doppler{};
    std::vector<double> magnitude;
    double range_resolution{};  ///< c / (2 B) [m]
    double bin_width{};         ///< Doppler bin [Hz]
    double first_frequency{};   ///< Doppler of column 0 [Hz]

    [[nodiscard]] double at(std::size_t row, std::size_t col) const { return magnitude[row * n_doppler + col]; }
    [[nodiscard]] std::size_t zero_bin() const { return n_doppler / 2; }
    /// Monostatic-equivalent range of the center of a fast-time cell [m].
    [[nodiscard]] double range_of_bin(std::size_t bin) const
    {
        return (static_cast<double>(bin) - 0.5) * range_resolution;
    }
    [[nodiscard]] DopplerSpectrum row(std::size_t range_bin) const;
};

/// Sample `range_bin` of every subsample-th symbol. `subsample` must be a
/// multiple of the frame set's symbol stride.
SlowTimeSignal slow_time_extract(const FrameSet& frames, std::size_t range_bin, std::size_t subsample);

DopplerSpectrum doppler_spectrum(const SlowTimeSignal& sig, Window window = Window::rectangular);

/// Doppler spectra of cells [first_bin, last_bin] stacked by range. Defaults
/// to every cell of the frame.
RangeDopplerMap range_doppler_map(const FrameSet& frames, std::size_t subsample, Window window = Window::rectangular,
                                  std::optional<std::size_t> first_bin = std::nullopt,
                                  std::optional<std::size_t> last_bin = std::nullopt);

/// f_D = 2 v cos(beta / 2) cos(delta) / lambda.
double predict_bistatic_doppler(double speed, double bistatic_angle, double delta, double wavelength);

/// Detected line, frequency refined by parabolic interpolation.
struct SpectralPeak
{
    std::size_t bin{};
    double frequency{};
    double magnitude{};
};

struct PeakOptions
{
    double threshold_db{10.0};     ///< above the median magnitude
    std::size_t min_separation{2}; ///< bins
};

std::vector<SpectralPeak> detect_peaks(const DopplerSpectrum& spec, const PeakOptions& options = {});

class MetricError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Median spacing of adjacent detected lines [Hz]. Throws MetricError with
/// fewer than three peaks.
double impulse_spacing(const DopplerSpectrum& spec, const PeakOptions& options = {});
double impulse_spacing(const DopplerSpectrum& spec, double threshold_db);

/// Extent of the Doppler support around 0 Hz.
struct DopplerSupport
{
    std::size_t lower_bin{};
    std::size_t upper_bin{};
    double lower_edge{};  ///< [Hz]
    double upper_edge{};  ///< [Hz]
    double width{};       ///< (upper_bin - lower_bin + 1) bins [Hz]
    double noise_floor{}; ///< median of the smoothed power
    double threshold{};   ///< smoothed-power threshold

    /// Largest |frequency| reached by the support [Hz].
    [[nodiscard]] double edge() const { return std::max(std::abs(lower_edge), std::abs(upper_edge)); }
};

struct SupportOptions
{
    double floor_margin_db{6.0};
    /// Moving-average length on the power spectrum before thresholding.
    std::size_t smoothing_bins{9};
};

/// The power spectrum is smoothed, the floor taken as its median, and the
/// support grown outward from 0 Hz while the smoothed power stays above
/// floor + margin. Each edge is then placed on the outermost raw bin above the
/// threshold within half a smoothing window of the smoothed edge.
DopplerSupport doppler_support(const DopplerSpectrum& spec, const SupportOptions& options = {});

/// Width of doppler_support() [Hz].
double doppler_spread(const DopplerSpectrum& spec, double floor_margin_db = 6.0);

/// Pearson correlation coefficient. Throws std::invalid_argument on length
/// mismatch, fewer than two samples, or zero variance.
double pearson_correlation(std::span<const double> a, std::span<const double> b);
double pearson_correlation(const DopplerSpectrum& a, const DopplerSpectrum& b);

}  // namespace rotorsim
