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
 * @file geometry.hpp
 * @brief Bistatic transmitter / rotation-center / receiver geometry.
 *
 * Frame convention: the rotation axis is +z and the rotation plane is z = 0,
 * with the rotation center at the origin. Transmitter and receiver directions
 * are given by a zenith angle (measured from +z) and an azimuth (measured
 * counter-clockwise from +x in the rotation plane).
 *
 * Rotor angles (rotation rate, initial phase) are measured in the opposite
 * sense to the azimuth: a point at rotor angle theta lies at azimuth -theta.
 * With that convention the first-order bistatic range of a point at radius l
 * is R_O - A_B * l * cos(theta + phi_B), with phi_B the composite phase below.
 */

#pragma once

#include "rotorsim/types.hpp"

namespace rotorsim {

/// Placement of transmitter and receiver relative to a rotation center.
struct BistaticGeometry
{
    double tx_range{};    ///< R_T [m]
    double rx_range{};    ///< R_R [m]
    double tx_zenith{};   ///< from the rotation axis [rad]
    double rx_zenith{};   ///< from the rotation axis [rad]
    double tx_azimuth{};  ///< in the rotation plane [rad]
    double rx_azimuth{};  ///< in the rotation plane [rad]

    /// Throws std::invalid_argument when a range is non-positive or an angle
    /// is outside zenith [0, pi] / azimuth [0, 2pi).
    void validate() const;

    [[nodiscard]] Vec3 tx_position() const;
    [[nodiscard]] Vec3 rx_position() const;

    /// Angle at the rotation center between the transmitter and receiver
    /// lines of sight.
    [[nodiscard]] double bistatic_angle() const;

    /// Equal-zenith placement with the requested bistatic angle. The receiver
    /// azimuth is chosen counter-clockwise of the transmitter. Throws when the
    /// angle is not reachable at that zenith (beta > 2 * min(zenith, pi - zenith)).
    static BistaticGeometry from_bistatic_angle(double tx_range, double rx_range, double zenith,
                                                double bistatic_angle, double tx_azimuth = 0.0);

    /// Geometry seen from `center` for the given absolute Tx/Rx positions.
    static BistaticGeometry from_positions(const Vec3& tx, const Vec3& rx, const Vec3& center = {});
};

/// Bistatic modulation factors of a rotating point.
struct BistaticFactors
{
    double amplitude{};         ///< A_B in [0, 2]
    double phase{};             ///< phi_B [rad]
    double total_range{};       ///< R_O = R_T + R_R [m]
    double bistatic_angle{};    ///< beta in [0, pi]
    bool radicand_clamped{false};  ///< A_B radicand was negative and clamped to 0
};

BistaticFactors bistatic_factors(const BistaticGeometry& geom);

/// R_O - A_B * l * cos(omega * t + phi_B).
double rotating_point_bistatic_range(const BistaticFactors& factors, double radius, double rotation_rate,
                                     double t);

/// Wraps an angle to [0, 2pi).
double wrap_two_pi(double angle);

}  // namespace rotorsim
