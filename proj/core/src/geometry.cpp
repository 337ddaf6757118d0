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

#include "rotorsim/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rotorsim {

namespace {

Vec3 direction(double zenith, double azimuth)
{
    return {std::sin(zenith) * std::cos(azimuth), std::sin(zenith) * std::sin(azimuth), std::cos(zenith)};
}

void check_angle(double value, double lo, double hi, bool hi_inclusive, const char* name)
{
    const bool ok = std::isfinite(value) && value >= lo && (hi_inclusive ? value <= hi : value < hi);
    if (!ok)
        throw std::invalid_argument(std::string("BistaticGeometry: ") + name + " out of range");
}

}  // namespace

double wrap_two_pi(double angle)
{
    double w = std::fmod(angle, kTwoPi);
    if (w < 0.0)
        w += kTwoPi;
    if (w >= kTwoPi)
        w = 0.0;
    return w;
}

void BistaticGeometry::validate() const
{
    if (!(tx_range > 0.0) || !std::isfinite(tx_range))
        throw std::invalid_argument("BistaticGeometry: tx_range must be > 0");
    if (!(rx_range > 0.0) || !std::isfinite(rx_range))
        throw std::invalid_argument("BistaticGeometry: rx_range must be > 0");
    check_angle(tx_zenith, 0.0, kPi, true, "tx_zenith");
    check_angle(rx_zenith, 0.0, kPi, true, "rx_zenith");
    check_angle(tx_azimuth, 0.0, kTwoPi, false, "tx_azimuth");
    check_angle(rx_azimuth, 0.0, kTwoPi, false, "rx_azimuth");
}

Vec3 BistaticGeometry::tx_position() const { return tx_range * direction(tx_zenith, tx_azimuth); }

Vec3 BistaticGeometry::rx_position() const { return rx_range * direction(rx_zenith, rx_azimuth); }

double BistaticGeometry::bistatic_angle() const
{
    const double c = direction(tx_zenith, tx_azimuth).dot(direction(rx_zenith, rx_azimuth));
    return std::acos(std::clamp(c, -1.0, 1.0));
}

BistaticGeometry BistaticGeometry::from_bistatic_angle(double tx_range, double rx_range, double zenith,
                                                       double bistatic_angle, double tx_azimuth)
{
    check_angle(zenith, 0.0, kPi, true, "zenith");
    check_angle(bistatic_angle, 0.0, kPi, true, "bistatic_angle");

    const double s2 = std::sin(zenith) * std::sin(zenith);
    const double c2 = std::cos(zenith) * std::cos(zenith);
    double separation = 0.0;
    if (s2 < 1e-15) {
        if (bistatic_angle > 1e-9)
            throw std::invalid_argument("from_bistatic_angle: only beta = 0 is reachable on the rotation axis");
    } else {
        const double cos_sep = (std::cos(bistatic_angle) - c2) / s2;
        if (cos_sep < -1.0 - 1e-9 || cos_sep > 1.0 + 1e-9)
            throw std::invalid_argument("from_bistatic_angle: bistatic angle not reachable at this zenith");
        separation = std::acos(std::clamp(cos_sep, -1.0, 1.0));
    }

    BistaticGeometry g;
    g.tx_range = tx_range;
    g.rx_range = rx_range;
    g.tx_zenith = zenith;
    g.rx_zenith = zenith;
    g.tx_azimuth = wrap_two_pi(tx_azimuth);
    g.rx_azimuth = wrap_two_pi(tx_azimuth + separation);
    g.validate();
    return g;
}

BistaticGeometry BistaticGeometry::from_positions(const Vec3& tx, const Vec3& rx, const Vec3& center)
{
    auto angles = [](const Vec3& v, double& range, double& zenith, double& azimuth) {
        range = v.norm();
        if (!(range > 0.0))
            throw std::invalid_argument("from_positions: antenna coincides with the rotation center");
        zenith = std::acos(std::clamp(v.z / range, -1.0, 1.0));
        azimuth = (v.x == 0.0 && v.y == 0.0) ? 0.0 : wrap_two_pi(std::atan2(v.y, v.x));
    };
    BistaticGeometry g;
    angles(tx - center, g.tx_range, g.tx_zenith, g.tx_azimuth);
    angles(rx - center, g.rx_range, g.rx_zenith, g.rx_azimuth);
    return g;
}

BistaticFactors bistatic_factors(const BistaticGeometry& geom)
{
    BistaticFactors f;
    f.total_range = geom.tx_range + geom.rx_range;
    f.bistatic_angle = geom.bistatic_angle();

    const double half = std::cos(f.bistatic_angle / 2.0);
    const double zen_sum = std::cos(geom.tx_zenith) + std::cos(geom.rx_zenith);
    double radicand = 4.0 * half * half - zen_sum * zen_sum;
    if (radicand < 0.0) {
        f.radicand_clamped = true;
        radicand = 0.0;
    }
    f.amplitude = std::min(std::sqrt(radicand), 2.0);

    // atan2 keeps the quadrant that a plain arctan of the ratio loses when the
    // denominator goes negative.
    const double dphi = geom.tx_azimuth - geom.rx_azimuth;
    const double num = std::sin(geom.rx_zenith) * std::sin(dphi);
    const double den = std::sin(geom.tx_zenith) + std::sin(geom.rx_zenith) * std::cos(dphi);
    f.phase = geom.tx_azimuth - std::atan2(num, den);
    return f;
}

double rotating_point_bistatic_range(const BistaticFactors& factors, double radius, double rotation_rate,
                                     double t)
{
    return factors.total_range - factors.amplitude * radius * std::cos(rotation_rate * t + factors.phase);
}

}  // namespace rotorsim
