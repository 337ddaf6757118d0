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

#include "rotorsim/waveform.hpp"

#include <algorithm>
#include <stdexcept>

namespace rotorsim {

OfdmConfig OfdmConfig::centered(double carrier_frequency, std::size_t n_subcarriers, std::size_t active_count,
                                double symbol_duration, std::size_t n_symbols)
{
    OfdmConfig cfg;
    cfg.carrier_frequency = carrier_frequency;
    cfg.n_subcarriers = n_subcarriers;
    cfg.active_count = active_count;
    cfg.active_first = active_count <= n_subcarriers ? (n_subcarriers - active_count) / 2 + 1 : 1;
    cfg.symbol_duration = symbol_duration;
    cfg.n_symbols = n_symbols;
    return cfg;
}

void OfdmConfig::validate() const
{
    if (!(carrier_frequency > 0.0))
        throw std::invalid_argument("OfdmConfig: carrier_frequency must be > 0");
    if (n_subcarriers == 0)
        throw std::invalid_argument("OfdmConfig: n_subcarriers must be >= 1");
    if (active_count == 0)
        throw std::invalid_argument("OfdmConfig: active band is empty");
    if (active_first < 1 || active_last() > n_subcarriers)
        throw std::invalid_argument("OfdmConfig: active band must lie within [1, N]");
    if (!(symbol_duration > 0.0))
        throw std::invalid_argument("OfdmConfig: symbol_duration must be > 0");
    if (n_symbols == 0)
        throw std::invalid_argument("OfdmConfig: n_symbols must be >= 1");
}

double sample_time(const OfdmConfig& cfg, std::size_t symbol, std::size_t sample)
{
    return (static_cast<double>(symbol) + static_cast<double>(sample) / static_cast<double>(cfg.n_subcarriers)) *
           cfg.symbol_duration;
}

std::size_t range_cell(const OfdmConfig& cfg, double bistatic_range)
{
    if (bistatic_range < 0.0)
        return 0;
    return static_cast<std::size_t>(std::floor(bistatic_range / cfg.range_cell_width())) + 1;
}

ModulationGrid ModulationGrid::repeated(std::vector<Complex> column, std::size_t n_symbols)
{
    if (column.empty() || n_symbols == 0)
        throw std::invalid_argument("ModulationGrid: empty grid");
    ModulationGrid g;
    g.n_subcarriers_ = column.size();
    g.n_symbols_ = n_symbols;
    g.n_columns_ = 1;
    g.data_ = std::move(column);
    return g;
}

ModulationGrid ModulationGrid::per_symbol(std::vector<Complex> data, std::size_t n_subcarriers, std::size_t n_symbols)
{
    if (n_subcarriers == 0 || n_symbols == 0)
        throw std::invalid_argument("ModulationGrid: empty grid");
    if (data.size() != n_subcarriers * n_symbols)
        throw std::invalid_argument("ModulationGrid: data size does not match N x M");
    ModulationGrid g;
    g.n_subcarriers_ = n_subcarriers;
    g.n_symbols_ = n_symbols;
    g.n_columns_ = n_symbols;
    g.data_ = std::move(data);
    return g;
}

Complex ModulationGrid::at(std::size_t n, std::size_t m) const
{
    if (n < 1 || n > n_subcarriers_ || m >= n_symbols_)
        throw std::out_of_range("ModulationGrid::at");
    return column(m)[n - 1];
}

std::span<const Complex> ModulationGrid::column(std::size_t m) const
{
    const std::size_t col = n_columns_ == 1 ? 0 : m;
    return std::span<const Complex>(data_).subspan(col * n_subcarriers_, n_subcarriers_);
}

ModulationGrid newman_grid(const OfdmConfig& cfg)
{
    cfg.validate();
    const auto k_total = static_cast<double>(cfg.active_count);
    std::vector<Complex> column(cfg.n_subcarriers, Complex{});
    for (std::size_t k = 0; k < cfg.active_count; ++k) {
        // (k-1)^2 with 1-based k; reduce modulo 2K before scaling to keep the
        // argument small for large K.
        const auto kk = static_cast<unsigned long long>(k);
        const auto sq = (kk * kk) % (2ULL * cfg.active_count);
        column[cfg.active_first - 1 + k] = std::polar(1.0, kPi * static_cast<double>(sq) / k_total);
    }
    return ModulationGrid::repeated(std::move(column), cfg.n_symbols);
}

FastTimeFrame synthesize_symbol(const OfdmConfig& cfg, const ModulationGrid& grid, std::size_t symbol)
{
    if (symbol >= cfg.n_symbols)
        throw std::out_of_range("synthesize_symbol: symbol index outside [0, M)");
    if (grid.n_subcarriers() != cfg.n_subcarriers)
        throw std::invalid_argument("synthesize_symbol: grid does not match the subcarrier count");

    const std::size_t n_total = cfg.n_subcarriers;
    const auto column = grid.column(symbol);
    FastTimeFrame frame;
    frame.symbol_index = symbol;
    frame.samples.assign(n_total, Complex{});
    for (std::size_t mu = 0; mu < n_total; ++mu) {
        Complex acc{};
        for (std::size_t n = cfg.active_first; n <= cfg.active_last(); ++n) {
            const Complex d = column[n - 1];
            if (d == Complex{})
                continue;
            // Exact integer reduction of n mu mod N keeps the phase accurate.
            const std::size_t r = (n * mu) % n_total;
            acc += d * std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(n_total));
        }
        frame.samples[mu] = acc;
    }
    return frame;
}

double crest_factor(std::span<const Complex> samples)
{
    if (samples.empty())
        throw std::invalid_argument("crest_factor: empty input");
    double peak = 0.0;
    double energy = 0.0;
    for (const auto& s : samples) {
        const double p = std::norm(s);
        peak = std::max(peak, p);
        energy += p;
    }
    if (energy == 0.0)
        throw std::invalid_argument("crest_factor: zero signal");
    return std::sqrt(peak / (energy / static_cast<double>(samples.size())));
}

}  // namespace rotorsim
