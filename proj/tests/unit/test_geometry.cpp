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


#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "rotorsim/geometry.hpp"

using namespace rotorsim;

namespace {

double wrapped_difference(double a, double b)
{
    return std::remainder(a - b, kTwoPi);
}

}  // namespace

TEST_SUITE("geometry")
{
    TEST_CASE("monostatic in-plane placement gives maximum modulation")
    {
        const BistaticGeometry g{5.0, 5.0, kPi / 2, kPi / 2, 0.3, 0.3};
        const auto f = bistatic_factors(g);
        CHECK(f.bistatic_angle == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(f.amplitude == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(f.total_range == doctest::Approx(10.0));
        CHECK_FALSE(f.radicand_clamped);
    }

    TEST_CASE("forward scatter removes the modulation")
    {
        const BistaticGeometry g{5.0, 7.0, kPi / 2, kPi / 2, 0.0, kPi};
        const auto f = bistatic_factors(g);
        CHECK(f.bistatic_angle == doctest::Approx(kPi).epsilon(1e-12));
        CHECK(f.amplitude < 1e-6);
        CHECK(f.amplitude >= 0.0);
    }

    TEST_CASE("closed-form factors match a brute-force fit of the exact two-leg range")
    {
        // zen_t = 80, zen_r = 70, az_t = 0, az_r = 40 degrees; l << R.
        const BistaticGeometry g{400.0, 600.0, deg2rad(80), deg2rad(70), 0.0, deg2rad(40)};
        const auto f = bistatic_factors(g);
        const double l = 0.1655;
        const auto fit = oracle::fit_exact_range(g.tx_position(), g.rx_position(), l);
        CHECK(std::abs(fit.amplitude - f.amplitude) / fit.amplitude < 0.01);
        CHECK(std::abs(wrapped_difference(fit.phase, f.phase)) < 0.01);
        CHECK(fit.offset == doctest::Approx(f.total_range).epsilon(1e-6));
    }

    TEST_CASE("fit oracle agrees over random geometries")
    {
        std::mt19937_64 rng(2024);
        std::uniform_real_distribution<double> zen(0.05, kPi - 0.05);
        std::uniform_real_distribution<double> az(0.0, kTwoPi);
        std::uniform_real_distribution<double> range(50.0, 500.0);
        for (int trial = 0; trial < 200; ++trial) {
            const BistaticGeometry g{range(rng), range(rng), zen(rng), zen(rng), az(rng), az(rng)};
            const auto f = bistatic_factors(g);
            const auto fit = oracle::fit_exact_range(g.tx_position(), g.rx_position(), 0.1);
            if (f.amplitude < 0.05)
                continue;  // phase is ill-conditioned near forward scatter
            CHECK(std::abs(fit.amplitude - f.amplitude) / f.amplitude < 0.01);
            CHECK(std::abs(wrapped_difference(fit.phase, f.phase)) < 0.01);
        }
    }

    TEST_CASE("amplitude equals |sin(zen_t) e^(j az_t) + sin(zen_r) e^(j az_r)|")
    {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 500; ++trial) {
            const BistaticGeometry g{1.0 + u(rng), 1.0 + u(rng), kPi * u(rng), kPi * u(rng),
                                     kTwoPi * u(rng) * 0.999, kTwoPi * u(rng) * 0.999};
            const auto f = bistatic_factors(g);
            const Complex v = std::polar(std::sin(g.tx_zenith), g.tx_azimuth) +
                              std::polar(std::sin(g.rx_zenith), g.rx_azimuth);
            CHECK(f.amplitude == doctest::Approx(std::abs(v)).epsilon(1e-7));
            CHECK(f.amplitude >= 0.0);
            CHECK(f.amplitude <= 2.0 + 1e-12);
        }
    }

    TEST_CASE("bistatic angle comes from the Tx/Rx direction vectors")
    {
        const BistaticGeometry g{3.0, 4.0, deg2rad(80), deg2rad(70), 0.0, deg2rad(40)};
        const auto dt = oracle::direction(g.tx_zenith, g.tx_azimuth);
        const auto dr = oracle::direction(g.rx_zenith, g.rx_azimuth);
        CHECK(g.bistatic_angle() == doctest::Approx(std::acos(dt.dot(dr))).epsilon(1e-12));
    }

    TEST_CASE("rotating point range: hub, peak approach, bound")
    {
        BistaticFactors f;
        f.amplitude = 2.0;
        f.phase = 0.0;
        f.total_range = 10.0;
        CHECK(rotating_point_bistatic_range(f, 0.0, 157.0, 0.123) == doctest::Approx(10.0));
        CHECK(rotating_point_bistatic_range(f, 0.1655, 157.0, 0.0) == doctest::Approx(10.0 - 0.331));

        f.amplitude = 1.3;
        f.phase = 0.7;
        const double omega = rpm2rad_s(1500);
        for (int k = 0; k < 1000; ++k) {
            const double r = rotating_point_bistatic_range(f, 0.2, omega, k * 1e-4);
            CHECK(std::abs(r - f.total_range) <= f.amplitude * 0.2 + 1e-12);
        }
    }

    TEST_CASE("rotating point range is periodic in 2 pi / omega")
    {
        BistaticFactors f{1.7, 1.1, 8.0, 0.5, false};
        const double omega = rpm2rad_s(1500);
        const double period = kTwoPi / omega;
        for (int k = 0; k < 360; ++k) {
            const double t = period * k / 360.0;
            CHECK(rotating_point_bistatic_range(f, 0.1655, omega, t + period) ==
                  doctest::Approx(rotating_point_bistatic_range(f, 0.1655, omega, t)).epsilon(1e-12));
        }
    }

    TEST_CASE("modulation amplitude is non-increasing in the bistatic angle")
    {
        for (const double zenith : {kPi / 2, deg2rad(80), deg2rad(60)}) {
            double previous = 3.0;
            const double max_beta = 2.0 * std::min(zenith, kPi - zenith);
            for (int k = 0; k <= 90; ++k) {
                const double beta = max_beta * k / 90.0;
                const auto g = BistaticGeometry::from_bistatic_angle(5.0, 6.0, zenith, beta);
                CHECK(g.bistatic_angle() == doctest::Approx(beta).epsilon(1e-6));
                const double a = bistatic_factors(g).amplitude;
                CHECK(a <= previous + 1e-12);
                previous = a;
            }
        }
    }

    TEST_CASE("coincident Tx/Rx gives A_B = 2 sin(zenith)")
    {
        for (const double zen : {0.0, 0.3, 1.0, kPi / 2, 2.5}) {
            const BistaticGeometry g{4.0, 4.0, zen, zen, 1.0, 1.0};
            CHECK(bistatic_factors(g).amplitude == doctest::Approx(2.0 * std::sin(zen)).epsilon(1e-12));
        }
    }

    TEST_CASE("geometry from positions reproduces the stored placement")
    {
        const BistaticGeometry g{3.0, 4.0, deg2rad(80), deg2rad(70), 0.2, deg2rad(40)};
        const Vec3 hub{0.1, -0.2, 0.05};
        const auto h = BistaticGeometry::from_positions(g.tx_position(), g.rx_position(), hub);
        CHECK(h.tx_range == doctest::Approx((g.tx_position() - hub).norm()));
        CHECK(h.rx_range == doctest::Approx((g.rx_position() - hub).norm()));
        const auto same = BistaticGeometry::from_positions(g.tx_position(), g.rx_position());
        CHECK(same.tx_zenith == doctest::Approx(g.tx_zenith));
        CHECK(same.rx_azimuth == doctest::Approx(g.rx_azimuth));
    }

    TEST_CASE("invalid geometries are rejected")
    {
        CHECK_THROWS_AS((BistaticGeometry{0.0, 1.0, 1.0, 1.0, 0.0, 0.0}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((BistaticGeometry{1.0, 1.0, 4.0, 1.0, 0.0, 0.0}.validate()), std::invalid_argument);
        CHECK_THROWS_AS((BistaticGeometry{1.0, 1.0, 1.0, 1.0, 0.0, 7.0}.validate()), std::invalid_argument);
        CHECK_THROWS(BistaticGeometry::from_bistatic_angle(1.0, 1.0, deg2rad(30), deg2rad(90)));
    }
}
