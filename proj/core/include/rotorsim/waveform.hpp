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
 * @file waveform.hpp
 * @brief OFDM numerology, modulation-symbol grids and baseband symbol synthesis.
 *
 * Subcarriers are indexed n = 1..N. Subcarrier n sits at f_n = f_0 + n / T.
 * Fast-time sample mu of symbol m is taken at t = m T + (mu / N) T; use
 * sample_time() rather than recomputing this anywhere else.
 */

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rotorsim/types.hpp"

namespace rotorsim {

struct OfdmConfig
{
    double carrier_frequency{};    ///< f_0 [Hz]
    std::size_t n_subcarriers{};   ///< N
    std::size_t active_first{};    ///< first energized subcarrier, 1-based
    std::size_t active_count{};    ///< K energized subcarriers
    double symbol_duration{};      ///< T [s]
    std::size_t n_symbols{};       ///< M

    /// Active band centered in [1, N].
    static OfdmConfig centered(double carrier_frequency, std::size_t n_subcarriers, std::size_t active_count,
                               double symbol_duration, std::size_t n_symbols);

    void validate() const;

    [[nodiscard]] std::size_t active_last() const { return active_first + active_count - 1; }
    [[nodiscard]] bool is_active(std::size_t n) const { return n >= active_first && n <= active_last(); }
    [[nodiscard]] double subcarrier_spacing() const { return 1.0 / symbol_duration; }
    [[nodiscard]] double subcarrier_frequency(std::size_t n) const
    {
        return carrier_frequency + static_cast<double>(n) / symbol_duration;
    }
    /// N / T, the sampled bandwidth. This is the bandwidth quoted for a setup.
    [[nodiscard]] double sampled_bandwidth() const { return static_cast<double>(n_subcarriers) / symbol_duration; }
    /// K / T, the energized part of the band.
    [[nodiscard]] double occupied_bandwidth() const { return static_cast<double>(active_count) / symbol_duration; }
    /// Bistatic-range extent of one fast-time sample, c T / N.
    [[nodiscard]] double range_cell_width() const { return kSpeedOfLight * symbol_duration / static_cast<double>(n_subcarriers); }
    /// c / (2 B) with B the sampled bandwidth.
    [[nodiscard]] double range_resolution() const { return kSpeedOfLight / (2.0 * sampled_bandwidth()); }
    [[nodiscard]] double max_frequency() const { return subcarrier_frequency(active_last()); }
};

/// t = m T + (mu / N) T.
double sample_time(const OfdmConfig& cfg, std::size_t symbol, std::size_t sample);

/// Fast-time range cell (1..N-1) holding a bistatic range, or 0 for ranges
/// before the first cell. Cell mu covers [(mu - 1) cT/N, mu cT/N).
std::size_t range_cell(const OfdmConfig& cfg, double bistatic_range);

/// Complex modulation symbols D(n, m).
///
/// A grid either holds a single column reused for every symbol (a repeated
/// sounding sequence) or one column per symbol.
class ModulationGrid
{
public:
    ModulationGrid() = default;

    /// Same column for every symbol. `column` is indexed by n - 1.
    static ModulationGrid repeated(std::vector<Complex> column, std::size_t n_symbols);
    /// Column-major N x M matrix, element (n, m) at (m * N + n - 1).
    static ModulationGrid per_symbol(std::vector<Complex> data, std::size_t n_subcarriers, std::size_t n_symbols);

    [[nodiscard]] std::size_t n_subcarriers() const { return n_subcarriers_; }
    [[nodiscard]] std::size_t n_symbols() const { return n_symbols_; }
    [[nodiscard]] bool is_repeated() const { return n_columns_ == 1; }
    [[nodiscard]] std::size_t n_columns() const { return n_columns_; }

    /// D(n, m) with n 1-based.
    [[nodiscard]] Complex at(std::size_t n, std::size_t m) const;
    /// All subcarriers of symbol m, indexed n - 1.
    [[nodiscard]] std::span<const Complex> column(std::size_t m) const;
    [[nodiscard]] std::span<const Complex> data() const { return data_; }

    friend bool operator==(const ModulationGrid&, const ModulationGrid&) = default;

private:
    std::vector<Complex> data_;
    std::size_t n_subcarriers_{};
    std::size_t n_symbols_{};
    std::size_t n_columns_{};
};

/// Newman multisine: D = exp(j pi (k-1)^2 / K) on the k-th of K active
/// subcarriers, 0 elsewhere, identical for every symbol.
ModulationGrid newman_grid(const OfdmConfig& cfg);

/// One baseband symbol, indexed by fast-time sample.
struct FastTimeFrame
{
    std::vector<Complex> samples;
    std::size_t symbol_index{};
};

/// x(mu, m) = sum_n D(n, m) exp(j 2 pi n mu / N), carrier factored out.
FastTimeFrame synthesize_symbol(const OfdmConfig& cfg, const ModulationGrid& grid, std::size_t symbol);

/// Peak-to-RMS amplitude ratio.
double crest_factor(std::span<const Complex> samples);

}  // namespace rotorsim
