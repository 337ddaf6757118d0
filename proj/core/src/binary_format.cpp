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

#include "rotorsim/binary_format.hpp"

#include <openssl/evp.h>

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <sstream>
#include <stdexcept>

namespace rotorsim {

namespace {

constexpr std::array<std::uint8_t, 4> kMagic{'R', 'S', 'I', 'M'};

template <typename T>
void put_le(std::vector<std::uint8_t>& out, T value)
{
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    const U bits = std::bit_cast<U>(value);
    for (std::size_t i = 0; i < sizeof(U); ++i)
        out.push_back(static_cast<std::uint8_t>(bits >> (8 * i)));
}

template <typename T>
T get_le(std::span<const std::uint8_t> in, std::size_t offset)
{
    using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(U); ++i)
        bits |= static_cast<U>(in[offset + i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

std::string fmt(double v)
{
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::ofstream open_for_write(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out)
{
    std::ofstream out(path, mode | std::ios::trunc);
    if (!out)
        throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out)
        throw std::runtime_error("write to '" + path.string() + "' failed");
}

}  // namespace

std::vector<std::uint8_t> encode(const BinaryMatrix& m)
{
    const std::size_t per_sample = m.type == SampleType::complex32 ? 2 : 1;
    if (m.values.size() != m.rows * m.cols * per_sample)
        throw std::invalid_argument("encode: value count does not match rows x cols");

    std::vector<std::uint8_t> out;
    out.reserve(m.byte_size());
    for (const auto b : kMagic)
        out.push_back(b);
    put_le(out, kBinaryFormatVersion);
    put_le(out, static_cast<std::uint32_t>(m.kind));
    put_le(out, static_cast<std::uint32_t>(m.type));
    put_le(out, m.rows);
    put_le(out, m.cols);
    put_le(out, m.row_axis.origin);
    put_le(out, m.row_axis.step);
    put_le(out, m.col_axis.origin);
    put_le(out, m.col_axis.step);
    for (const float v : m.values)
        put_le(out, v);
    return out;
}

BinaryMatrix decode(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < kBinaryHeaderSize || !std::equal(kMagic.begin(), kMagic.end(), bytes.begin()))
        throw std::runtime_error("decode: not a rotorsim binary payload");
    if (get_le<std::uint32_t>(bytes, 4) != kBinaryFormatVersion)
        throw std::runtime_error("decode: unsupported format version");

    BinaryMatrix m;
    m.kind = static_cast<PayloadKind>(get_le<std::uint32_t>(bytes, 8));
    const auto type = get_le<std::uint32_t>(bytes, 12);
    if (type != 1 && type != 2)
        throw std::runtime_error("decode: unknown sample type");
    m.type = static_cast<SampleType>(type);
    m.rows = get_le<std::uint64_t>(bytes, 16);
    m.cols = get_le<std::uint64_t>(bytes, 24);
    m.row_axis = {get_le<double>(bytes, 32), get_le<double>(bytes, 40)};
    m.col_axis = {get_le<double>(bytes, 48), get_le<double>(bytes, 56)};

    const std::size_t per_sample = m.type == SampleType::complex32 ? 2 : 1;
    const std::size_t count = m.rows * m.cols * per_sample;
    if (bytes.size() != kBinaryHeaderSize + count * sizeof(float))
        throw std::runtime_error("decode: payload size does not match header");
    m.values.resize(count);
    for (std::size_t i = 0; i < count; ++i)
        m.values[i] = get_le<float>(bytes, kBinaryHeaderSize + i * sizeof(float));
    return m;
}

void write_binary(const std::filesystem::path& path, const BinaryMatrix& m)
{
    const auto bytes = encode(m);
    auto out = open_for_write(path, std::ios::binary);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    finish(out, path);
}

BinaryMatrix read_binary(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return decode(bytes);
}

BinaryMatrix to_binary(const DopplerSpectrum& spec)
{
    BinaryMatrix m;
    m.kind = PayloadKind::doppler_spectrum;
    m.rows = 1;
    m.cols = spec.size();
    m.col_axis = {spec.first_frequency, spec.bin_width};
    m.values.assign(spec.magnitude.begin(), spec.magnitude.end());
    return m;
}

BinaryMatrix to_binary(const RangeDopplerMap& map)
{
    BinaryMatrix m;
    m.kind = PayloadKind::range_doppler_map;
    m.rows = map.n_range;
    m.cols = map.n_doppler;
    m.row_axis = {map.range_of_bin(map.first_range_bin), map.range_resolution};
    m.col_axis = {map.first_frequency, map.bin_width};
    m.values.assign(map.magnitude.begin(), map.magnitude.end());
    return m;
}

BinaryMatrix to_binary(const FrameSet& frames)
{
    BinaryMatrix m;
    m.kind = PayloadKind::frames;
    m.type = SampleType::complex32;
    m.rows = frames.frames.size();
    m.cols = frames.ofdm.n_subcarriers;
    const double first = frames.frames.empty() ? 0.0 : static_cast<double>(frames.frames.front().symbol_index);
    m.row_axis = {first, static_cast<double>(frames.symbol_stride)};
    m.col_axis = {0.0, frames.ofdm.range_cell_width()};
    m.values.reserve(2 * m.rows * m.cols);
    for (const auto& f : frames.frames) {
        for (const auto& s : f.samples) {
            m.values.push_back(static_cast<float>(s.real()));
            m.values.push_back(static_cast<float>(s.imag()));
        }
    }
    return m;
}

BinaryMatrix to_binary(const ModulationGrid& grid)
{
    BinaryMatrix m;
    m.kind = PayloadKind::modulation_grid;
    m.type = SampleType::complex32;
    m.rows = grid.n_columns();
    m.cols = grid.n_subcarriers();
    m.row_axis = {0.0, 1.0};
    m.col_axis = {1.0, 1.0};
    for (const auto& d : grid.data()) {
        m.values.push_back(static_cast<float>(d.real()));
        m.values.push_back(static_cast<float>(d.imag()));
    }
    return m;
}

BinaryMatrix to_binary(const SlowTimeSignal& sig)
{
    BinaryMatrix m;
    m.kind = PayloadKind::slow_time;
    m.type = SampleType::complex32;
    m.rows = 1;
    m.cols = sig.samples.size();
    m.row_axis = {static_cast<double>(sig.range_bin), 0.0};
    m.col_axis = {0.0, 1.0 / sig.slow_time_rate};
    for (const auto& s : sig.samples) {
        m.values.push_back(static_cast<float>(s.real()));
        m.values.push_back(static_cast<float>(s.imag()));
    }
    return m;
}

DopplerSpectrum spectrum_from_binary(const BinaryMatrix& m)
{
    if (m.kind != PayloadKind::doppler_spectrum || m.type != SampleType::real32 || m.rows != 1)
        throw std::runtime_error("payload is not a Doppler spectrum");
    DopplerSpectrum s;
    s.magnitude.assign(m.values.begin(), m.values.end());
    s.first_frequency = m.col_axis.origin;
    s.bin_width = m.col_axis.step;
    return s;
}

RangeDopplerMap map_from_binary(const BinaryMatrix& m)
{
    if (m.kind != PayloadKind::range_doppler_map || m.type != SampleType::real32)
        throw std::runtime_error("payload is not a range-Doppler map");
    RangeDopplerMap map;
    map.n_range = m.rows;
    map.n_doppler = m.cols;
    map.range_resolution = m.row_axis.step;
    map.first_range_bin =
        map.range_resolution > 0.0 ? static_cast<std::size_t>(std::lround(m.row_axis.origin / map.range_resolution + 0.5))
                                   : 0;
    map.first_frequency = m.col_axis.origin;
    map.bin_width = m.col_axis.step;
    map.magnitude.assign(m.values.begin(), m.values.end());
    return map;
}

ModulationGrid grid_from_binary(const BinaryMatrix& m, std::size_t n_symbols)
{
    if (m.kind != PayloadKind::modulation_grid || m.type != SampleType::complex32)
        throw std::runtime_error("payload is not a modulation grid");
    std::vector<Complex> data;
    data.reserve(m.rows * m.cols);
    for (std::size_t i = 0; i < m.values.size(); i += 2)
        data.emplace_back(m.values[i], m.values[i + 1]);
    if (m.rows == 1)
        return ModulationGrid::repeated(std::move(data), n_symbols);
    if (m.rows < n_symbols)
        throw std::runtime_error("modulation grid file has fewer symbols than configured");
    data.resize(n_symbols * m.cols);
    return ModulationGrid::per_symbol(std::move(data), m.cols, n_symbols);
}

void write_csv(const std::filesystem::path& path, const DopplerSpectrum& spec)
{
    auto out = open_for_write(path);
    out << "frequency_hz,magnitude\n";
    for (std::size_t k = 0; k < spec.size(); ++k)
        out << fmt(spec.frequency(k)) << ',' << fmt(static_cast<float>(spec.magnitude[k])) << '\n';
    finish(out, path);
}

void write_csv(const std::filesystem::path& path, const RangeDopplerMap& map)
{
    auto out = open_for_write(path);
    out << "range_m,doppler_hz,magnitude\n";
    for (std::size_t r = 0; r < map.n_range; ++r) {
        const std::string range = fmt(map.range_of_bin(map.first_range_bin + r));
        for (std::size_t d = 0; d < map.n_doppler; ++d)
            out << range << ',' << fmt(map.first_frequency + static_cast<double>(d) * map.bin_width) << ','
                << fmt(static_cast<float>(map.at(r, d))) << '\n';
    }
    finish(out, path);
}

void write_csv(const std::filesystem::path& path, const FrameSet& frames)
{
    auto out = open_for_write(path);
    out << "symbol,sample,real,imag\n";
    for (const auto& f : frames.frames) {
        for (std::size_t mu = 0; mu < f.samples.size(); ++mu)
            out << f.symbol_index << ',' << mu << ',' << fmt(static_cast<float>(f.samples[mu].real())) << ','
                << fmt(static_cast<float>(f.samples[mu].imag())) << '\n';
    }
    finish(out, path);
}

DopplerSpectrum read_spectrum_csv(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::string line;
    if (!std::getline(in, line) || line != "frequency_hz,magnitude")
        throw std::runtime_error("'" + path.string() + "' is not a spectrum CSV");
    std::vector<double> freqs;
    DopplerSpectrum s;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("malformed CSV row: " + line);
        freqs.push_back(std::stod(line.substr(0, comma)));
        s.magnitude.push_back(std::stod(line.substr(comma + 1)));
    }
    if (freqs.size() < 2)
        throw std::runtime_error("spectrum CSV needs at least two rows");
    s.first_frequency = freqs.front();
    s.bin_width = (freqs.back() - freqs.front()) / static_cast<double>(freqs.size() - 1);
    return s;
}

std::string sha256_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open '" + path.string() + "'");
    std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
    if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1)
        throw std::runtime_error("sha256: digest init failed");
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        if (in.gcount() > 0)
            EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
    }
    std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx.get(), digest.data(), &len);
    static constexpr char kHex[] = "0123456789abcdef";
    std::string hex;
    for (unsigned int i = 0; i < len; ++i) {
        hex.push_back(kHex[digest[i] >> 4]);
        hex.push_back(kHex[digest[i] & 0xF]);
    }
    return hex;
}

}  // namespace rotorsim
