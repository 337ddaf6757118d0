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
 * @file binary_format.hpp
 * @brief Payload files: fixed-header little-endian binary matrices and CSV.
 *
 * Binary layout (all fields little-endian):
 *
 *   offset size  field
 *        0    4  magic "RSIM"
 *        4    4  u32 format version (1)
 *        8    4  u32 payload kind (PayloadKind)
 *       12    4  u32 sample type: 1 = real f32, 2 = complex f32 (re, im)
 *       16    8  u64 rows
 *       24    8  u64 cols
 *       32    8  f64 row axis origin
 *       40    8  f64 row axis step
 *       48    8  f64 column axis origin
 *       56    8  f64 column axis step
 *       64       row-major payload, rows * cols samples
 */

#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "rotorsim/dsp.hpp"

namespace rotorsim {

inline constexpr std::size_t kBinaryHeaderSize = 64;
inline constexpr std::uint32_t kBinaryFormatVersion = 1;

enum class PayloadKind : std::uint32_t
{
    doppler_spectrum = 1,  ///< rows = 1, cols = Doppler bins; col axis in Hz
    range_doppler_map = 2, ///< rows = range cells, cols = Doppler bins; row axis in m
    frames = 3,            ///< rows = symbols, cols = fast-time samples; row axis in symbols
    modulation_grid = 4,   ///< rows = grid columns (1 if repeated), cols = N; col axis = subcarrier index
    slow_time = 5,         ///< rows = 1, cols = samples; row origin = range cell, col axis in s
};

enum class SampleType : std::uint32_t
{
    real32 = 1,
    complex32 = 2,
};

struct Axis
{
    double origin{};
    double step{};
};

struct BinaryMatrix
{
    PayloadKind kind{PayloadKind::doppler_spectrum};
    SampleType type{SampleType::real32};
    std::uint64_t rows{};
    std::uint64_t cols{};
    Axis row_axis;
    Axis col_axis;
    /// rows * cols values, or 2 * rows * cols interleaved (re, im) for complex.
    std::vector<float> values;

    [[nodiscard]] std::size_t byte_size() const { return kBinaryHeaderSize + values.size() * sizeof(float); }
};

std::vector<std::uint8_t> encode(const BinaryMatrix& m);
/// Throws std::runtime_error on a bad magic, version, or truncated payload.
BinaryMatrix decode(std::span<const std::uint8_t> bytes);

void write_binary(const std::filesystem::path& path, const BinaryMatrix& m);
BinaryMatrix read_binary(const std::filesystem::path& path);

BinaryMatrix to_binary(const DopplerSpectrum& spec);
BinaryMatrix to_binary(const RangeDopplerMap& map);
BinaryMatrix to_binary(const FrameSet& frames);
BinaryMatrix to_binary(const ModulationGrid& grid);
BinaryMatrix to_binary(const SlowTimeSignal& sig);

DopplerSpectrum spectrum_from_binary(const BinaryMatrix& m);
RangeDopplerMap map_from_binary(const BinaryMatrix& m);
/// A single-row grid is repeated for `n_symbols` symbols.
ModulationGrid grid_from_binary(const BinaryMatrix& m, std::size_t n_symbols);

void write_csv(const std::filesystem::path& path, const DopplerSpectrum& spec);
void write_csv(const std::filesystem::path& path, const RangeDopplerMap& map);
void write_csv(const std::filesystem::path& path, const FrameSet& frames);
/// Reads the two-column "frequency_hz,magnitude" file written above.
DopplerSpectrum read_spectrum_csv(const std::filesystem::path& path);

/// Lower-case hex SHA-256 of a file's contents.
std::string sha256_file(const std::filesystem::path& path);

}  // namespace rotorsim
