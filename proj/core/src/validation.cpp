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


#include "rotorsim/validation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>

#include "rotorsim/binary_format.hpp"

namespace rotorsim {

namespace {

std::string num(double v)
{
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

double relative_l2(std::span<const Complex> a, std::span<const Complex> b)
{
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        diff += std::norm(a[i] - b[i]);
        ref += std::norm(b[i]);
    }
    return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
}

// Small numerology that keeps a rotor inside a handful of range cells.
OfdmConfig small_ofdm()
{
    return OfdmConfig::centered(3.6e9, 160, 128, 8e-6, 64);
}

Propeller small_rotor()
{
    Propeller p;
    p.n_blades = 2;
    p.blade_length = 0.1655;
    p.rotation_rate = rpm2rad_s(1500);
    p.initial_phase = 0.3;
    p.rcs_density = 0.01;
    return p;
}

CheckResult check_geometry_limits()
{
    const auto mono = bistatic_factors(BistaticGeometry::from_bistatic_angle(5, 5, kPi / 2, 0.0));
    const auto fwd = bistatic_factors(BistaticGeometry::from_bistatic_angle(5, 5, kPi / 2, kPi));
    const bool ok = std::abs(mono.amplitude - 2.0) < 1e-12 && std::abs(fwd.amplitude) < 1e-6;
    return {"geometry: monostatic A_B = 2, forward scatter A_B = 0", ok,
            "A_mono=" + num(mono.amplitude) + " A_fwd=" + num(fwd.amplitude)};
}

CheckResult check_geometry_exact_range()
{
    // First-order rotating-point range against the exact vector distance.
    const auto geom = BistaticGeometry::from_bistatic_angle(40.0, 60.0, deg2rad(70), deg2rad(50), 0.4);
    const auto f = bistatic_factors(geom);
    const double radius = 0.1655;
    const double omega = rpm2rad_s(1500);
    double worst = 0.0;
    for (int k = 0; k < 360; ++k) {
        const double t = k / 360.0 / 25.0;
        // Rotor angle runs opposite to azimuth.
        const double az = -(omega * t);
        const Vec3 p{radius * std::cos(az), radius * std::sin(az), 0.0};
        const double exact = (geom.tx_position() - p).norm() + (geom.rx_position() - p).norm();
        const double model = rotating_point_bistatic_range(f, radius, omega, t);
        worst = std::max(worst, std::abs(exact - model) / (f.amplitude * radius));
    }
    return {"geometry: first-order range matches exact range", worst < 0.01,
            "worst error / (A_B l) = " + num(worst)};
}

CheckResult check_newman_crest()
{
    const auto cfg = OfdmConfig::centered(1e9, 256, 128, 1e-6, 1);
    const auto frame = synthesize_symbol(cfg, newman_grid(cfg), 0);
    const double cf = crest_factor(frame.samples);
    return {"waveform: Newman crest factor below 2", cf < 2.0, "crest factor " + num(cf)};
}

CheckResult check_blade_limits()
{
    // Interval oracle: the set of l in [0, L] whose range lands in the cell,
    // solved directly for the linear range law.
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const auto cfg = small_ofdm();
    const double w = cfg.range_cell_width();
    std::size_t bad = 0;
    for (int trial = 0; trial < 2000; ++trial) {
        Propeller p = small_rotor();
        p.blade_length = 0.05 + 0.5 * u(rng);
        BistaticFactors f;
        f.amplitude = 2.0 * u(rng);
        f.phase = kTwoPi * u(rng);
        f.total_range = 2.0 + 5.0 * w * u(rng);
        const double t = u(rng) * 0.04;
        const double c = f.amplitude * std::cos(p.rotation_rate * t + p.blade_phase(f, 1));
        const std::size_t mu = range_cell(cfg, f.total_range) + static_cast<std::size_t>(u(rng) * 5) - 2;
        const double lo = (static_cast<double>(mu) - 1.0) * w;
        const double hi = static_cast<double>(mu) * w;
        double a = 0.0;
        double b = p.blade_length;
        if (std::abs(c) < 1e-9) {
            if (!(f.total_range >= lo && f.total_range < hi))
                b = 0.0;
        }
        else {
            const double x = (f.total_range - hi) / c;
            const double y = (f.total_range - lo) / c;
            a = std::clamp(std::min(x, y), 0.0, p.blade_length);
            b = std::clamp(std::max(x, y), 0.0, p.blade_length);
        }
        const auto got = blade_limits(mu, 1, f, p, cfg, t);
        const bool empty_ref = b - a <= 1e-12;
        const bool ok = empty_ref ? got.width() <= 1e-12
                                  : std::abs(got.inner - a) < 1e-9 && std::abs(got.outer - b) < 1e-9;
        bad += ok ? 0 : 1;
    }
    return {"scatter: blade limits match interval oracle", bad == 0, std::to_string(bad) + " mismatches of 2000"};
}

CheckResult check_point_oracle()
{
    const auto cfg = small_ofdm();
    const auto grid = newman_grid(cfg);
    const auto geom = BistaticGeometry::from_bistatic_angle(2.625, 2.625, kPi / 2, deg2rad(60));
    const auto rotor = make_rotor_echo(small_rotor(), geom);
    std::vector<Complex> closed;
    std::vector<Complex> points;
    for (std::size_t m = 0; m < cfg.n_symbols; m += 4) {
        const auto a = closed_form_returns(rotor, cfg, grid, m);
        const auto b = point_oracle_returns(512, rotor, cfg, grid, m);
        closed.insert(closed.end(), a.samples.begin(), a.samples.end());
        points.insert(points.end(), b.samples.begin(), b.samples.end());
    }
    const double err = relative_l2(closed, points);
    return {"scatter: closed form matches 512-point oracle", err < 1e-2, "relative L2 " + num(err)};
}

CheckResult check_noise()
{
    const auto cfg = small_ofdm();
    const auto grid = newman_grid(cfg);
    const auto geom = BistaticGeometry::from_bistatic_angle(2.625, 2.625, kPi / 2, deg2rad(30));
    Scene scene;
    scene.propellers.push_back(small_rotor());
    scene.noise_power = 0.1;
    scene.rng_seed = 5;
    const auto full = simulate_scene(scene, geom, cfg, grid);
    SimulationOptions strided;
    strided.symbol_stride = 4;
    const auto part = simulate_scene(scene, geom, cfg, grid, strided);
    bool same = true;
    for (std::size_t i = 0; i < part.frames.size(); ++i)
        same = same && part.frames[i].samples == full.frames[i * 4].samples;
    const auto again = simulate_scene(scene, geom, cfg, grid);
    for (std::size_t i = 0; i < full.frames.size(); ++i)
        same = same && again.frames[i].samples == full.frames[i].samples;
    return {"scene: noise is deterministic and stride independent", same, same ? "bit-identical" : "frames differ"};
}

CheckResult check_parseval()
{
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    SlowTimeSignal sig;
    sig.slow_time_rate = 1000.0;
    for (int i = 0; i < 512; ++i)
        sig.samples.emplace_back(g(rng), g(rng));
    const auto spec = doppler_spectrum(sig);
    double et = 0.0;
    double ef = 0.0;
    for (const auto& s : sig.samples)
        et += std::norm(s);
    for (const double m : spec.magnitude)
        ef += m * m;
    ef /= static_cast<double>(spec.size());
    const double rel = std::abs(et - ef) / et;
    return {"dsp: Doppler spectrum satisfies Parseval", rel < 1e-9, "relative energy error " + num(rel)};
}

CheckResult check_binary_round_trip()
{
    DopplerSpectrum s;
    s.bin_width = 7.5;
    s.first_frequency = -15.0;
    s.magnitude = {0.5, 1.25, 3.0, 0.0};
    const auto bytes = encode(to_binary(s));
    const auto back = spectrum_from_binary(decode(bytes));
    const bool ok = back.magnitude == s.magnitude && back.bin_width == s.bin_width &&
                    back.first_frequency == s.first_frequency && bytes.size() == kBinaryHeaderSize + 16;
    return {"io: binary spectrum round trip", ok, std::to_string(bytes.size()) + " bytes"};
}

}  // namespace

std::vector<CheckResult> run_self_checks()
{
    const std::vector<std::function<CheckResult()>> checks{
        check_geometry_limits, check_geometry_exact_range, check_newman_crest, check_blade_limits,
        check_point_oracle,    check_noise,                check_parseval,     check_binary_round_trip,
    };
    std::vector<CheckResult> results;
    for (const auto& c : checks) {
        try {
            results.push_back(c());
        }
        catch (const std::exception& e) {
            results.push_back({"check threw", false, e.what()});
        }
    }
    return results;
}

}  // namespace rotorsim
