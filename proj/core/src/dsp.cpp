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

#include "rotorsim/dsp.hpp"

#include <fftw3.h>

#include <algorithm>
#include <mutex>
#include <numeric>

#include "rotorsim/parallel.hpp"

namespace rotorsim {

namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

/// In-place forward DFT, X[k] = sum_n x[n] exp(-j 2 pi k n / L).
void forward_dft(std::vector<Complex>& data)
{
    const int n = static_cast<int>(data.size());
    auto* buf = reinterpret_cast<fftw_complex*>(data.data());
    fftw_plan plan;
    {
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan);
}

std::vector<double> window_coefficients(Window w, std::size_t length)
{
    std::vector<double> c(length, 1.0);
    if (w == Window::hann && length > 1) {
        for (std::size_t i = 0; i < length; ++i)
            c[i] = 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(length - 1)));
    }
    return c;
}

double median_of(std::vector<double> v)
{
    if (v.empty())
        return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    return *mid;
}

}  // namespace

Window parse_window(const std::string& name)
{
    if (name == "rectangular" || name == "rect")
        return Window::rectangular;
    if (name == "hann")
        return Window::hann;
    throw std::invalid_argument("unknown window '" + name + "' (expected rectangular or hann)");
}

std::string to_string(Window w) { return w == Window::hann ? "hann" : "rectangular"; }

DopplerSpectrum RangeDopplerMap::row(std::size_t range_bin) const
{
    if (range_bin < first_range_bin || range_bin >= first_range_bin + n_range)
        throw std::out_of_range("RangeDopplerMap::row: range bin not in map");
    DopplerSpectrum s;
    const auto offset = static_cast<std::ptrdiff_t>((range_bin - first_range_bin) * n_doppler);
    s.magnitude.assign(magnitude.begin() + offset, magnitude.begin() + offset + static_cast<std::ptrdiff_t>(n_doppler));
    s.bin_width = bin_width;
    s.first_frequency = first_frequency;
    return s;
}

SlowTimeSignal slow_time_extract(const FrameSet& frames, std::size_t range_bin, std::size_t subsample)
{
    if (subsample == 0)
        throw std::invalid_argument("slow_time_extract: subsample must be >= 1");
    if (subsample % frames.symbol_stride != 0)
        throw std::invalid_argument("slow_time_extract: subsample must be a multiple of the simulated symbol stride");
    if (range_bin >= frames.ofdm.n_subcarriers)
        throw std::out_of_range("slow_time_extract: range bin outside the frame");

    const std::size_t step = subsample / frames.symbol_stride;
    SlowTimeSignal sig;
    sig.range_bin = range_bin;
    sig.slow_time_rate = 1.0 / (frames.ofdm.symbol_duration * static_cast<double>(subsample));
    for (std::size_t i = 0; i < frames.frames.size(); i += step)
        sig.samples.push_back(frames.frames[i].samples.at(range_bin));
    return sig;
}

DopplerSpectrum doppler_spectrum(const SlowTimeSignal& sig, Window window)
{
    const std::size_t length = sig.samples.size();
    if (length < 2)
        throw std::invalid_argument("doppler_spectrum: need at least two slow-time samples");
    if (!(sig.slow_time_rate > 0.0))
        throw std::invalid_argument("doppler_spectrum: slow_time_rate must be > 0");

    const auto w = window_coefficients(window, length);
    std::vector<Complex> buf(length);
    for (std::size_t i = 0; i < length; ++i)
        buf[i] = sig.samples[i] * w[i];
    forward_dft(buf);

    DopplerSpectrum spec;
    spec.bin_width = sig.slow_time_rate / static_cast<double>(length);
    const std::size_t zero = length / 2;
    spec.first_frequency = -static_cast<double>(zero) * spec.bin_width;
    spec.magnitude.resize(length);
    for (std::size_t k = 0; k < length; ++k)
        spec.magnitude[k] = std::abs(buf[(k + length - zero) % length]);
    return spec;
}

RangeDopplerMap range_doppler_map(const FrameSet& frames, std::size_t subsample, Window window,
                                  std::optional<std::size_t> first_bin, std::optional<std::size_t> last_bin)
{
    const std::size_t n_cells = frames.ofdm.n_subcarriers;
    const std::size_t lo = first_bin.value_or(0);
    const std::size_t hi = std::min(last_bin.value_or(n_cells - 1), n_cells - 1);
    if (lo > hi)
        throw std::invalid_argument("range_doppler_map: empty range-bin interval");

    RangeDopplerMap map;
    map.first_range_bin = lo;
    map.n_range = hi - lo + 1;
    map.range_resolution = frames.ofdm.range_resolution();

    // First row fixes the Doppler axis.
    const DopplerSpectrum first = doppler_spectrum(slow_time_extract(frames, lo, subsample), window);
    map.n_doppler = first.size();
    map.bin_width = first.bin_width;
    map.first_frequency = first.first_frequency;
    map.magnitude.resize(map.n_range * map.n_doppler);
    std::copy(first.magnitude.begin(), first.magnitude.end(), map.magnitude.begin());

    parallel_for(map.n_range - 1, [&](std::size_t r) {
        const DopplerSpectrum s = doppler_spectrum(slow_time_extract(frames, lo + r + 1, subsample), window);
        std::copy(s.magnitude.begin(), s.magnitude.end(),
                  map.magnitude.begin() + static_cast<std::ptrdiff_t>((r + 1) * map.n_doppler));
    });
    return map;
}

double predict_bistatic_doppler(double speed, double bistatic_angle, double delta, double wavelength)
{
    if (!(wavelength > 0.0))
        throw std::invalid_argument("predict_bistatic_doppler: wavelength must be > 0");
    return 2.0 * speed * std::cos(bistatic_angle / 2.0) * std::cos(delta) / wavelength;
}

std::vector<SpectralPeak> detect_peaks(const DopplerSpectrum& spec, const PeakOptions& options)
{
    const auto& mag = spec.magnitude;
    const std::size_t length = mag.size();
    std::vector<SpectralPeak> peaks;
    if (length < 3)
        return peaks;

    const double threshold = median_of(mag) * std::pow(10.0, options.threshold_db / 20.0);
    std::vector<std::size_t> candidates;
    for (std::size_t k = 1; k + 1 < length; ++k) {
        if (mag[k] > threshold && mag[k] > mag[k - 1] && mag[k] >= mag[k + 1])
            candidates.push_back(k);
    }
    std::sort(candidates.begin(), candidates.end(), [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

    std::vector<std::size_t> accepted;
    for (const std::size_t k : candidates) {
        const bool crowded = std::any_of(accepted.begin(), accepted.end(), [&](std::size_t j) {
            return (k > j ? k - j : j - k) < options.min_separation;
        });
        if (!crowded)
            accepted.push_back(k);
    }
    std::sort(accepted.begin(), accepted.end());

    for (const std::size_t k : accepted) {
        // Parabolic vertex on log magnitude.
        double offset = 0.0;
        const double floor_mag = 1e-300;
        const double a = std::log(std::max(mag[k - 1], floor_mag));
        const double b = std::log(std::max(mag[k], floor_mag));
        const double c = std::log(std::max(mag[k + 1], floor_mag));
        const double denom = a - 2.0 * b + c;
        if (denom < 0.0)
            offset = std::clamp(0.5 * (a - c) / denom, -0.5, 0.5);
        peaks.push_back({k, spec.frequency(k) + offset * spec.bin_width, mag[k]});
    }
    return peaks;
}

double impulse_spacing(const DopplerSpectrum& spec, const PeakOptions& options)
{
    const auto peaks = detect_peaks(spec, options);
    if (peaks.size() < 3)
        throw MetricError("impulse_spacing: found " + std::to_string(peaks.size()) +
                          " peaks above threshold, need at least 3");
    std::vector<double> gaps;
    for (std::size_t i = 1; i < peaks.size(); ++i)
        gaps.push_back(peaks[i].frequency - peaks[i - 1].frequency);
    std::sort(gaps.begin(), gaps.end());
    const std::size_t n = gaps.size();
    return n % 2 == 1 ? gaps[n / 2] : 0.5 * (gaps[n / 2 - 1] + gaps[n / 2]);
}

double impulse_spacing(const DopplerSpectrum& spec, double threshold_db)
{
    PeakOptions opts;
    opts.threshold_db = threshold_db;
    return impulse_spacing(spec, opts);
}

DopplerSupport doppler_support(const DopplerSpectrum& spec, const SupportOptions& options)
{
    const std::size_t length = spec.size();
    if (length == 0)
        throw std::invalid_argument("doppler_support: empty spectrum");

    std::vector<double> power(length);
    for (std::size_t k = 0; k < length; ++k)
        power[k] = spec.magnitude[k] * spec.magnitude[k];

    const std::size_t half = std::max<std::size_t>(options.smoothing_bins, 1) / 2;
    std::vector<double> prefix(length + 1, 0.0);
    std::partial_sum(power.begin(), power.end(), prefix.begin() + 1);
    std::vector<double> smooth(length);
    for (std::size_t k = 0; k < length; ++k) {
        const std::size_t lo = k >= half ? k - half : 0;
        const std::size_t hi = std::min(length - 1, k + half);
        smooth[k] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }

    DopplerSupport out;
    out.noise_floor = median_of(smooth);
    out.threshold = out.noise_floor * std::pow(10.0, options.floor_margin_db / 10.0);

    const std::size_t zero = spec.zero_bin();
    std::size_t lo_s = zero;
    std::size_t hi_s = zero;
    while (lo_s > 0 && smooth[lo_s - 1] > out.threshold)
        --lo_s;
    while (hi_s + 1 < length && smooth[hi_s + 1] > out.threshold)
        ++hi_s;

    // The smoothed support overshoots its outermost line by up to half a
    // window. Pull each edge back to the strongest raw bin within half a
    // window of it: that line is what holds the smoothed power up, whereas
    // isolated noise bins above the threshold are not.
    std::size_t lo = zero;
    std::size_t hi = zero;
    if (smooth[zero] > out.threshold) {
        const auto strongest = [&](std::size_t first, std::size_t last) {
            std::size_t best = first;
            for (std::size_t k = first; k <= last; ++k)
                if (power[k] > power[best])
                    best = k;
            return best;
        };
        hi = strongest(std::max(zero, hi_s >= half ? hi_s - half : 0), std::min(length - 1, hi_s + half));
        lo = strongest(lo_s >= half ? lo_s - half : 0, std::min(zero, lo_s + half));
    }

    out.lower_bin = lo;
    out.upper_bin = hi;
    out.lower_edge = spec.frequency(lo);
    out.upper_edge = spec.frequency(hi);
    out.width = static_cast<double>(hi - lo + 1) * spec.bin_width;
    return out;
}

double doppler_spread(const DopplerSpectrum& spec, double floor_margin_db)
{
    SupportOptions opts;
    opts.floor_margin_db = floor_margin_db;
    return doppler_support(spec, opts).width;
}

double pearson_correlation(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw std::invalid_argument("pearson_correlation: inputs differ in length");
    if (a.size() < 2)
        throw std::invalid_argument("pearson_correlation: need at least two samples");
    const double n = static_cast<double>(a.size());
    const double mean_a = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mean_b = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double cov = 0.0;
    double var_a = 0.0;
    double var_b = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - mean_a;
        const double db = b[i] - mean_b;
        cov += da * db;
        var_a += da * da;
        var_b += db * db;
    }
    if (var_a == 0.0 || var_b == 0.0)
        throw std::invalid_argument("pearson_correlation: zero-variance input");
    return std::clamp(cov / std::sqrt(var_a * var_b), -1.0, 1.0);
}

double pearson_correlation(const DopplerSpectrum& a, const DopplerSpectrum& b)
{
    return pearson_correlation(std::span<const double>(a.magnitude), std::span<const double>(b.magnitude));
}

}  // namespace rotorsim
