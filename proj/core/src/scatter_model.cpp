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

#include "rotorsim/scatter_model.hpp"

#include <algorithm>
#include <stdexcept>

namespace rotorsim {

namespace {

constexpr double kDegenerateProjection = 1e-9;
// Subcarrier phasors are advanced by recurrence and re-anchored this often.
constexpr std::size_t kReanchorInterval = 64;

double median3(double a, double b, double c) { return std::max(std::min(a, b), std::min(std::max(a, b), c)); }

double wavenumber(const OfdmConfig& cfg, std::size_t n) { return kTwoPi * cfg.subcarrier_frequency(n) / kSpeedOfLight; }

/// exp(j 2 pi n mu / N) with the product reduced exactly.
Complex subcarrier_phasor(const OfdmConfig& cfg, std::size_t n, std::size_t mu)
{
    const std::size_t r = (n * mu) % cfg.n_subcarriers;
    return std::polar(1.0, kTwoPi * static_cast<double>(r) / static_cast<double>(cfg.n_subcarriers));
}

/// sum_n D(n) w(n) exp(j 2 pi n mu / N) exp(j k_n x) sinc(k_n y) over the
/// active band.
Complex segment_sum(const OfdmConfig& cfg, std::span<const Complex> column, std::span<const double> weights,
                    std::size_t mu, double x, double y)
{
    const double dk = kTwoPi / (cfg.symbol_duration * kSpeedOfLight);
    const double fast_step = kTwoPi * static_cast<double>(mu) / static_cast<double>(cfg.n_subcarriers);
    const Complex phase_step = std::polar(1.0, fast_step + dk * x);
    const Complex sinc_step = std::polar(1.0, dk * y);

    Complex acc{};
    Complex phase{};
    Complex spin{};
    std::size_t since_anchor = kReanchorInterval;
    for (std::size_t n = cfg.active_first; n <= cfg.active_last(); ++n) {
        const double k = wavenumber(cfg, n);
        if (since_anchor == kReanchorInterval) {
            phase = subcarrier_phasor(cfg, n, mu) * std::polar(1.0, k * x);
            spin = std::polar(1.0, k * y);
            since_anchor = 0;
        }
        const Complex d = column[n - 1];
        if (d != Complex{}) {
            const double arg = k * y;
            const double s = std::abs(arg) < 1e-8 ? 1.0 : spin.imag() / arg;
            acc += d * (weights[n - 1] * s) * phase;
        }
        phase *= phase_step;
        spin *= sinc_step;
        ++since_anchor;
    }
    return acc;
}

}  // namespace

void Propeller::validate() const
{
    if (n_blades < 1)
        throw std::invalid_argument("Propeller: n_blades must be >= 1");
    if (!(blade_length > 0.0) || !std::isfinite(blade_length))
        throw std::invalid_argument("Propeller: blade_length must be > 0");
    if (!std::isfinite(rotation_rate) || !std::isfinite(initial_phase))
        throw std::invalid_argument("Propeller: rotation_rate and initial_phase must be finite");
    if (!(rcs_density >= 0.0))
        throw std::invalid_argument("Propeller: rcs_density must be >= 0");
}

double Propeller::blade_phase(const BistaticFactors& factors, int blade) const
{
    return factors.phase + initial_phase + kTwoPi * static_cast<double>(blade - 1) / static_cast<double>(n_blades);
}

double radar_amplitude(double sigma, double range, double frequency, double tx_amplitude)
{
    return bistatic_radar_amplitude(sigma, range, range, frequency, tx_amplitude);
}

double bistatic_radar_amplitude(double sigma, double tx_range, double rx_range, double frequency,
                                double tx_amplitude)
{
    if (!(tx_range > 0.0) || !(rx_range > 0.0))
        throw std::invalid_argument("radar_amplitude: range must be > 0");
    if (!(frequency > 0.0))
        throw std::invalid_argument("radar_amplitude: frequency must be > 0");
    if (!(sigma >= 0.0))
        throw std::invalid_argument("radar_amplitude: sigma must be >= 0");
    const double denom = 4.0 * kPi * kPi * kPi * tx_range * tx_range * rx_range * rx_range * frequency * frequency;
    return tx_amplitude * std::sqrt(kSpeedOfLight * sigma / denom);
}

BladeLimits blade_limits(std::size_t mu, int blade, const BistaticFactors& factors, const Propeller& prop,
                         const OfdmConfig& cfg, double t)
{
    const double cell = cfg.range_cell_width();
    const double near_edge = (static_cast<double>(mu) - 1.0) * cell;
    const double far_edge = static_cast<double>(mu) * cell;
    const double projection = factors.amplitude * std::cos(prop.rotation_rate * t + prop.blade_phase(factors, blade));
    const double length = prop.blade_length;

    if (std::abs(projection) < kDegenerateProjection) {
        const bool inside = factors.total_range >= near_edge && factors.total_range < far_edge;
        return inside ? BladeLimits{0.0, length} : BladeLimits{0.0, 0.0};
    }

    const double a = (factors.total_range - near_edge) / projection;
    const double b = (factors.total_range - far_edge) / projection;
    const double l1 = std::clamp(median3(0.0, a, b), 0.0, length);
    const double l2 = std::clamp(median3(length, a, b), 0.0, length);
    return {l1, std::max(l1, l2)};
}

RotorEcho make_rotor_echo(const Propeller& prop, const BistaticGeometry& geom_about_hub, double tx_amplitude)
{
    prop.validate();
    geom_about_hub.validate();
    RotorEcho r;
    r.propeller = prop;
    r.factors = bistatic_factors(geom_about_hub);
    r.tx_range = geom_about_hub.tx_range;
    r.rx_range = geom_about_hub.rx_range;
    r.tx_amplitude = tx_amplitude;
    return r;
}

std::vector<double> line_amplitudes(const RotorEcho& rotor, const OfdmConfig& cfg)
{
    std::vector<double> g(cfg.n_subcarriers, 0.0);
    for (std::size_t n = 1; n <= cfg.n_subcarriers; ++n)
        g[n - 1] = bistatic_radar_amplitude(rotor.propeller.rcs_density * 1.0, rotor.tx_range, rotor.rx_range,
                                            cfg.subcarrier_frequency(n), rotor.tx_amplitude);
    return g;
}

void accumulate_closed_form(const RotorEcho& rotor, std::span<const double> amplitudes, const OfdmConfig& cfg,
                            const ModulationGrid& grid, std::size_t symbol, TimeMode mode,
                            std::span<Complex> frame)
{
    if (frame.size() != cfg.n_subcarriers || amplitudes.size() != cfg.n_subcarriers)
        throw std::invalid_argument("accumulate_closed_form: size mismatch with the OFDM config");

    const Propeller& prop = rotor.propeller;
    const BistaticFactors& f = rotor.factors;
    const auto column = grid.column(symbol);

    // gamma_ni = 2 g(f_n): the (l2 - l1)/2 prefactor below carries the other half.
    std::vector<double> gamma(amplitudes.begin(), amplitudes.end());
    for (auto& v : gamma)
        v *= 2.0;

    const double reach = f.amplitude * prop.blade_length;
    const std::size_t first = std::max<std::size_t>(1, range_cell(cfg, f.total_range - reach));
    const std::size_t last = std::min(cfg.n_subcarriers - 1, range_cell(cfg, f.total_range + reach));

    for (int blade = 1; blade <= prop.n_blades; ++blade) {
        for (std::size_t mu = first; mu <= last; ++mu) {
            const double t = sample_time(cfg, symbol, mode == TimeMode::exact ? mu : 0);
            const BladeLimits lim = blade_limits(mu, blade, f, prop, cfg, t);
            if (lim.width() <= 0.0)
                continue;
            const double c = std::cos(prop.rotation_rate * t + prop.blade_phase(f, blade));
            const double delta_plus = f.amplitude * 0.5 * (lim.outer + lim.inner) * c;
            const double delta_minus = f.amplitude * 0.5 * lim.width() * c;
            const Complex sum = segment_sum(cfg, column, gamma, mu, -f.total_range + delta_plus, delta_minus);
            frame[mu] += 0.5 * lim.width() * sum;
        }
    }
}

EchoFrame closed_form_returns(const RotorEcho& rotor, const OfdmConfig& cfg, const ModulationGrid& grid,
                              std::size_t symbol, TimeMode mode)
{
    cfg.validate();
    if (symbol >= cfg.n_symbols)
        throw std::out_of_range("closed_form_returns: symbol index outside [0, M)");
    EchoFrame frame;
    frame.symbol_index = symbol;
    frame.samples.assign(cfg.n_subcarriers, Complex{});
    const auto amps = line_amplitudes(rotor, cfg);
    accumulate_closed_form(rotor, amps, cfg, grid, symbol, mode, frame.samples);
    return frame;
}

EchoFrame point_oracle_returns(std::size_t points_per_blade, const RotorEcho& rotor, const OfdmConfig& cfg,
                               const ModulationGrid& grid, std::size_t symbol, TimeMode mode)
{
    if (points_per_blade == 0)
        throw std::invalid_argument("point_oracle_returns: need at least one point per blade");
    cfg.validate();
    if (symbol >= cfg.n_symbols)
        throw std::out_of_range("point_oracle_returns: symbol index outside [0, M)");

    const Propeller& prop = rotor.propeller;
    const BistaticFactors& f = rotor.factors;
    const auto column = grid.column(symbol);
    const auto amps = line_amplitudes(rotor, cfg);
    const double spacing = prop.blade_length / static_cast<double>(points_per_blade);

    EchoFrame frame;
    frame.symbol_index = symbol;
    frame.samples.assign(cfg.n_subcarriers, Complex{});

    auto point_range = [&](double radius, int blade, std::size_t mu) {
        const double t = sample_time(cfg, symbol, mode == TimeMode::exact ? mu : 0);
        return f.total_range - f.amplitude * radius * std::cos(prop.rotation_rate * t + prop.blade_phase(f, blade));
    };

    for (int blade = 1; blade <= prop.n_blades; ++blade) {
        for (std::size_t k = 0; k < points_per_blade; ++k) {
            const double radius = (static_cast<double>(k) + 0.5) * spacing;
            const std::size_t guess = range_cell(cfg, point_range(radius, blade, 0));
            const std::size_t lo = guess > 1 ? guess - 1 : 1;
            for (std::size_t mu = lo; mu <= guess + 1 && mu < cfg.n_subcarriers; ++mu) {
                const double range = point_range(radius, blade, mu);
                if (range_cell(cfg, range) != mu)
                    continue;
                Complex acc{};
                for (std::size_t n = cfg.active_first; n <= cfg.active_last(); ++n) {
                    const double k_n = wavenumber(cfg, n);
                    acc += column[n - 1] * amps[n - 1] * subcarrier_phasor(cfg, n, mu) *
                           std::polar(1.0, -k_n * range);
                }
                frame.samples[mu] += spacing * acc;
            }
        }
    }
    return frame;
}

std::vector<Complex> classic_cw_returns(const Propeller& prop, double elevation, double monostatic_range,
                                        double frequency, std::span<const double> times, double tx_amplitude)
{
    prop.validate();
    const double k0 = kTwoPi * frequency / kSpeedOfLight;
    const double gamma = 2.0 * radar_amplitude(prop.rcs_density * 1.0, monostatic_range, frequency, tx_amplitude);
    const double length = prop.blade_length;
    const double cos_el = std::cos(elevation);

    std::vector<Complex> out;
    out.reserve(times.size());
    for (const double t : times) {
        Complex acc{};
        for (int i = 1; i <= prop.n_blades; ++i) {
            const double phi = prop.initial_phase + kTwoPi * static_cast<double>(i - 1) / prop.n_blades;
            const double proj = length * std::cos(prop.rotation_rate * t + phi) * cos_el;
            acc += gamma * std::polar(1.0, k0 * (-2.0 * monostatic_range + proj)) * (0.5 * length) * sinc(k0 * proj);
        }
        out.push_back(acc);
    }
    return out;
}

}  // namespace rotorsim
