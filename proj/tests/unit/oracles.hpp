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


// Independent reference computations shared by the unit and acceptance
// tests. Nothing here calls into the library's numerical paths; each oracle
// recomputes its quantity from first principles (direct sums, brute-force
// fits, explicit interval algebra).

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <span>
#include <vector>

#include "rotorsim/dsp.hpp"

namespace oracle {

using rotorsim::Complex;

inline constexpr double kC = 299792458.0;
inline constexpr double kPi = 3.14159265358979323846;

/// Relative L2 distance ||a - b|| / ||b||.
inline double relative_l2(std::span<const Complex> a, std::span<const Complex> b)
{
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num += std::norm(a[i] - b[i]);
        den += std::norm(b[i]);
    }
    return std::sqrt(num / den);
}

/// |<a, b>| / (||a|| ||b||).
inline double normalized_correlation(std::span<const Complex> a, std::span<const Complex> b)
{
    Complex dot{};
    double na = 0.0;
    double nb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        dot += a[i] * std::conj(b[i]);
        na += std::norm(a[i]);
        nb += std::norm(b[i]);
    }
    return std::abs(dot) / std::sqrt(na * nb);
}

/// Unit vector from zenith (from +z) and azimuth (from +x).
inline rotorsim::Vec3 direction(double zenith, double azimuth)
{
    return {std::sin(zenith) * std::cos(azimuth), std::sin(zenith) * std::sin(azimuth), std::cos(zenith)};
}

/// Least-squares fit of R(theta) = c0 + a cos(theta) + b sin(theta) to the
/// exact two-leg range of a point at radius l and rotor angle theta (azimuth
/// -theta). Returns {A, phi} with R = c0 - A l cos(theta + phi).
struct RangeFit
{
    double amplitude;
    double phase;
    double offset;
};

inline RangeFit fit_exact_range(const rotorsim::Vec3& tx, const rotorsim::Vec3& rx, double l, int samples = 720)
{
    // Normal equations for the orthogonal basis {1, cos, sin} on a uniform
    // full-period grid reduce to simple projections.
    double s0 = 0.0;
    double sc = 0.0;
    double ss = 0.0;
    for (int k = 0; k < samples; ++k) {
        const double theta = 2.0 * kPi * k / samples;
        const rotorsim::Vec3 p{l * std::cos(-theta), l * std::sin(-theta), 0.0};
        const double r = (tx - p).norm() + (rx - p).norm();
        s0 += r;
        sc += r * std::cos(theta);
        ss += r * std::sin(theta);
    }
    const double a = 2.0 * sc / samples;
    const double b = 2.0 * ss / samples;
    // -A l cos(theta + phi) = -A l cos(phi) cos(theta) + A l sin(phi) sin(theta)
    return {std::hypot(a, b) / l, std::atan2(b, -a), s0 / samples};
}

/// Direct DFT (no FFT), centered like the library's spectra.
inline std::vector<double> centered_dft_magnitude(std::span<const Complex> x)
{
    const std::size_t n = x.size();
    std::vector<double> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        Complex acc{};
        const long freq = static_cast<long>(k) - static_cast<long>(n / 2);
        for (std::size_t i = 0; i < n; ++i)
            acc += x[i] * std::polar(1.0, -2.0 * kPi * static_cast<double>(freq) * static_cast<double>(i) /
                                              static_cast<double>(n));
        out[k] = std::abs(acc);
    }
    return out;
}

/// Blade interval inside a range cell, solved directly: the l in [0, L] with
/// lo <= R_O - c l < hi for c = A_B cos(.). Returns {l1, l2}, l1 == l2 when empty.
inline std::pair<double, double> blade_interval(double r_o, double c, double lo, double hi, double length)
{
    if (std::abs(c) < 1e-9)
        return (r_o >= lo && r_o < hi) ? std::pair{0.0, length} : std::pair{0.0, 0.0};
    double a = (r_o - hi) / c;
    double b = (r_o - lo) / c;
    if (a > b)
        std::swap(a, b);
    a = std::clamp(a, 0.0, length);
    b = std::clamp(b, 0.0, length);
    if (b <= a)
        return {a, a};
    return {a, b};
}

/// Pearson coefficient by the textbook two-pass formula.
inline double pearson(std::span<const double> a, std::span<const double> b)
{
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(a.begin(), a.end(), 0.0) / n;
    const double mb = std::accumulate(b.begin(), b.end(), 0.0) / n;
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

/// Bistatic Doppler of a blade tip, 2 v cos(beta/2) cos(delta) / lambda.
inline double bistatic_doppler(double v, double beta, double delta, double wavelength)
{
    return 2.0 * v * std::cos(beta / 2.0) * std::cos(delta) / wavelength;
}

}  // namespace oracle
