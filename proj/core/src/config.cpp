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


#include "rotorsim/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "rotorsim/binary_format.hpp"

namespace rotorsim {

namespace {

constexpr const char* kSetup1 = R"(name: setup1
seed: 7
mode: exact
ofdm:
  center_frequency_ghz: 3.7
  total_subcarriers: 1600
  active_subcarriers: 1280
  symbol_duration_us: 8
  symbols: 16384
geometry:
  tx_range_m: 2.625
  rx_range_m: 2.625
  zenith_deg: 90
  bistatic_angle_deg: 30
scene:
  snr_db: 30
  propellers:
    - blades: 2
      blade_length_cm: 16.55
      rotation_rate_rpm: 1500
      initial_phase_deg: 0
      hub_offset_m: [0, 0, 0]
      rcs_density_m2_per_m: 0.01
  static_scatterers:
    - position_m: [0, 0, 0]
      rcs_m2: 0.01
dsp:
  subsample: 8
  window: rectangular
  spacing_window: hann
  peak_threshold_db: 10
  floor_margin_db: 6
  smoothing_bins: 9
output:
  directory: rotorsim_out
  format: binary
  payloads: [spectrum]
)";

// Hubs sit 0.35 m either side of the rotation-plane bisector of the Tx/Rx
// azimuths (15 deg at a 30 deg bistatic angle), about 11 range cells apart.
constexpr const char* kSetup2 = R"(name: setup2
seed: 11
mode: exact
ofdm:
  center_frequency_ghz: 7
  total_subcarriers: 2500
  active_subcarriers: 2048
  symbol_duration_us: 1.02
  symbols: 262144
geometry:
  tx_range_m: 3
  rx_range_m: 3
  zenith_deg: 90
  bistatic_angle_deg: 30
scene:
  snr_db: 30
  propellers:
    - blades: 2
      blade_length_cm: 16.55
      rotation_rate_rpm: 1500
      initial_phase_deg: 0
      hub_offset_m: [0.338074, 0.090587, 0]
      rcs_density_m2_per_m: 0.05
    - blades: 2
      blade_length_cm: 16.55
      rotation_rate_rpm: 2000
      initial_phase_deg: 0
      hub_offset_m: [-0.338074, -0.090587, 0]
      rcs_density_m2_per_m: 0.05
  static_scatterers:
    - position_m: [0, 0, 0]
      rcs_m2: 0.01
dsp:
  subsample: 64
  window: rectangular
  spacing_window: hann
  peak_threshold_db: 10
  floor_margin_db: 6
  smoothing_bins: 19
output:
  directory: rotorsim_out
  format: binary
  payloads: [spectrum, map]
)";

using Units = std::vector<std::pair<std::string, double>>;

const Units kFrequencyUnits{{"hz", 1.0}, {"khz", 1e3}, {"mhz", 1e6}, {"ghz", 1e9}};
const Units kTimeUnits{{"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}};
const Units kLengthUnits{{"m", 1.0}, {"cm", 1e-2}, {"mm", 1e-3}};
const Units kAngleUnits{{"deg", kPi / 180.0}, {"rad", 1.0}};
const Units kRateUnits{{"rpm", kTwoPi / 60.0}, {"hz", kTwoPi}, {"rad_s", 1.0}};

std::string where(const YAML::Node& node, const std::string& source)
{
    const auto mark = node.Mark();
    if (mark.line < 0)
        return source;
    return source + ":" + std::to_string(mark.line + 1);
}

/// One mapping node plus the keys consumed from it, so leftovers can be
/// reported as unknown.
class Section
{
public:
    Section(YAML::Node node, std::string path, const std::string& source, std::vector<std::string>& issues)
        : node_(std::move(node)), path_(std::move(path)), source_(source), issues_(issues)
    {
        if (node_ && !node_.IsMap()) {
            fail(node_, "must be a mapping");
            node_ = YAML::Node();
        }
    }

    [[nodiscard]] bool present() const { return node_.IsDefined() && !node_.IsNull(); }

    [[nodiscard]] YAML::Node raw(const std::string& key)
    {
        used_.insert(key);
        if (!present())
            return YAML::Node(YAML::NodeType::Undefined);
        const YAML::Node& view = node_;
        return view[key];
    }

    [[nodiscard]] std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

    void fail(const YAML::Node& at, const std::string& what) { issues_.push_back(where(at, source_) + ": " + what); }
    void fail_key(const std::string& key, const std::string& what)
    {
        issues_.push_back(where(node_, source_) + ": " + field(key) + ": " + what);
    }

    template <typename T>
    std::optional<T> scalar(const std::string& key)
    {
        const auto n = raw(key);
        if (!n)
            return std::nullopt;
        try {
            if (!n.IsScalar())
                throw YAML::Exception(n.Mark(), "not a scalar");
            return n.as<T>();
        }
        catch (const YAML::Exception&) {
            fail(n, field(key) + ": expected a " + type_name<T>());
            return std::nullopt;
        }
    }

    /// Value of `stem_<unit>` converted to SI. At most one unit variant may be given.
    std::optional<double> unit_value(const std::string& stem, const Units& units)
    {
        std::optional<double> value;
        std::string chosen;
        for (const auto& [suffix, scale] : units) {
            const std::string key = stem + "_" + suffix;
            if (auto v = scalar<double>(key)) {
                if (value) {
                    fail_key(key, "conflicts with " + field(chosen));
                    continue;
                }
                if (!std::isfinite(*v)) {
                    fail_key(key, "must be finite");
                    continue;
                }
                value = *v * scale;
                chosen = key;
            }
        }
        return value;
    }

    std::optional<Vec3> vec3(const std::string& key)
    {
        const auto n = raw(key);
        if (!n)
            return std::nullopt;
        if (!n.IsSequence() || n.size() != 3) {
            fail(n, field(key) + ": expected a list of three numbers");
            return std::nullopt;
        }
        try {
            return Vec3{n[0].as<double>(), n[1].as<double>(), n[2].as<double>()};
        }
        catch (const YAML::Exception&) {
            fail(n, field(key) + ": expected a list of three numbers");
            return std::nullopt;
        }
    }

    template <typename T>
    std::optional<std::vector<T>> list(const std::string& key)
    {
        const auto n = raw(key);
        if (!n)
            return std::nullopt;
        if (!n.IsSequence()) {
            fail(n, field(key) + ": expected a list");
            return std::nullopt;
        }
        std::vector<T> out;
        for (const auto& item : n) {
            try {
                out.push_back(item.as<T>());
            }
            catch (const YAML::Exception&) {
                fail(item, field(key) + ": expected a list of " + type_name<T>() + "s");
                return std::nullopt;
            }
        }
        return out;
    }

    void require(const std::string& key, bool ok)
    {
        if (!ok)
            fail_key(key, "is required");
    }

    void finish()
    {
        if (!present())
            return;
        for (const auto& kv : node_) {
            const auto key = kv.first.as<std::string>();
            if (!used_.contains(key))
                fail(kv.first, "unknown key '" + field(key) + "'");
        }
    }

private:
    template <typename T>
    static std::string type_name()
    {
        if constexpr (std::is_same_v<T, std::string>)
            return "string";
        else if constexpr (std::is_floating_point_v<T>)
            return "number";
        else
            return "integer";
    }

    YAML::Node node_;
    std::string path_;
    const std::string& source_;
    std::vector<std::string>& issues_;
    std::set<std::string> used_;
};

/// Maps merge key by key; lists and scalars in the overlay replace the base.
void merge_into(YAML::Node base, const YAML::Node& overlay)
{
    for (const auto& kv : overlay) {
        const auto key = kv.first.as<std::string>();
        YAML::Node current = base[key];
        if (current && current.IsMap() && kv.second.IsMap())
            merge_into(current, kv.second);
        else
            base[key] = kv.second;
    }
}

std::uint64_t splitmix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

void parse_ofdm(Section s, RunConfig& cfg)
{
    const auto center = s.unit_value("center_frequency", kFrequencyUnits);
    const auto carrier = s.unit_value("carrier_frequency", kFrequencyUnits);
    const auto n_total = s.scalar<std::size_t>("total_subcarriers");
    const auto n_active = s.scalar<std::size_t>("active_subcarriers");
    const auto first = s.scalar<std::size_t>("active_first");
    const auto duration = s.unit_value("symbol_duration", kTimeUnits);
    const auto symbols = s.scalar<std::size_t>("symbols");
    s.finish();

    if (center && carrier)
        s.fail_key("carrier_frequency", "give either center_frequency or carrier_frequency, not both");
    s.require("center_frequency_<unit> or carrier_frequency_<unit>", center || carrier);
    s.require("total_subcarriers", n_total.has_value());
    s.require("active_subcarriers", n_active.has_value());
    s.require("symbol_duration_<unit>", duration.has_value());
    s.require("symbols", symbols.has_value());
    if (!(n_total && n_active && duration && symbols && (center || carrier)))
        return;
    if (*duration <= 0.0) {
        s.fail_key("symbol_duration", "must be positive");
        return;
    }

    // The center frequency names the middle of the sampled band; subcarrier n
    // sits at f0 + n/T, so f0 = f_center - N / (2T).
    const double f0 = carrier ? *carrier : *center - static_cast<double>(*n_total) / (2.0 * *duration);
    if (first) {
        cfg.ofdm = OfdmConfig{f0, *n_total, *first, *n_active, *duration, *symbols};
    }
    else if (*n_active <= *n_total) {
        cfg.ofdm = OfdmConfig::centered(f0, *n_total, *n_active, *duration, *symbols);
    }
    else {
        s.fail_key("active_subcarriers", "exceeds total_subcarriers");
        return;
    }
    try {
        cfg.ofdm.validate();
    }
    catch (const std::exception& e) {
        s.fail_key("", e.what());
    }
}

void parse_geometry(Section s, RunConfig& cfg)
{
    auto& g = cfg.geometry;
    const auto tx = s.unit_value("tx_range", kLengthUnits);
    const auto rx = s.unit_value("rx_range", kLengthUnits);
    const auto zenith = s.unit_value("zenith", kAngleUnits);
    const auto beta = s.unit_value("bistatic_angle", kAngleUnits);
    const auto tx_az = s.unit_value("tx_azimuth", kAngleUnits);
    const auto tx_zen = s.unit_value("tx_zenith", kAngleUnits);
    const auto rx_zen = s.unit_value("rx_zenith", kAngleUnits);
    const auto rx_az = s.unit_value("rx_azimuth", kAngleUnits);
    s.finish();

    s.require("tx_range_<unit>", tx.has_value());
    s.require("rx_range_<unit>", rx.has_value());
    g.tx_range = tx.value_or(0.0);
    g.rx_range = rx.value_or(0.0);
    g.tx_azimuth = tx_az.value_or(0.0);

    if (beta) {
        if (tx_zen || rx_zen || rx_az)
            s.fail_key("bistatic_angle", "cannot be combined with tx_zenith/rx_zenith/rx_azimuth");
        g.bistatic_angle = *beta;
        g.zenith = zenith.value_or(kPi / 2);
    }
    else {
        if (zenith)
            s.fail_key("zenith", "only valid together with bistatic_angle; use tx_zenith/rx_zenith");
        s.require("bistatic_angle_<unit> or rx_azimuth_<unit>", rx_az.has_value());
        g.bistatic_angle.reset();
        g.zenith = tx_zen.value_or(kPi / 2);
        g.rx_zenith = rx_zen.value_or(g.zenith);
        g.rx_azimuth = rx_az.value_or(0.0);
    }
}

void parse_scene(Section s, RunConfig& cfg, const std::string& source, std::vector<std::string>& issues)
{
    auto& scene = cfg.scene;
    const auto snr = s.scalar<double>("snr_db");
    const auto noise = s.scalar<double>("noise_power");
    const auto tx_amp = s.scalar<double>("tx_amplitude");
    if (snr && noise)
        s.fail_key("noise_power", "give either snr_db or noise_power, not both");
    if (snr)
        scene.noise_power = noise_power_from_snr(*snr);
    else if (noise)
        scene.noise_power = *noise;
    else
        scene.noise_power = 0.0;
    scene.tx_amplitude = tx_amp.value_or(1.0);

    scene.propellers.clear();
    const auto props = s.raw("propellers");
    if (props && !props.IsSequence()) {
        s.fail(props, s.field("propellers") + ": expected a list");
    }
    else if (props) {
        for (std::size_t i = 0; i < props.size(); ++i) {
            Section p(props[i], s.field("propellers[" + std::to_string(i) + "]"), source, issues);
            Propeller prop;
            const auto blades = p.scalar<int>("blades");
            const auto length = p.unit_value("blade_length", kLengthUnits);
            const auto rate = p.unit_value("rotation_rate", kRateUnits);
            const auto phase = p.unit_value("initial_phase", kAngleUnits);
            const auto hub = p.vec3("hub_offset_m");
            const auto density = p.scalar<double>("rcs_density_m2_per_m");
            p.finish();
            p.require("blade_length_<unit>", length.has_value());
            p.require("rotation_rate_<unit>", rate.has_value());
            p.require("rcs_density_m2_per_m", density.has_value());
            prop.n_blades = blades.value_or(2);
            prop.blade_length = length.value_or(0.0);
            prop.rotation_rate = rate.value_or(0.0);
            prop.initial_phase = phase.value_or(0.0);
            prop.hub_offset = hub.value_or(Vec3{});
            prop.rcs_density = density.value_or(0.0);
            if (length && rate && density) {
                try {
                    prop.validate();
                }
                catch (const std::exception& e) {
                    p.fail_key("", e.what());
                }
            }
            scene.propellers.push_back(prop);
        }
    }

    scene.static_scatterers.clear();
    const auto statics = s.raw("static_scatterers");
    if (statics && !statics.IsSequence()) {
        s.fail(statics, s.field("static_scatterers") + ": expected a list");
    }
    else if (statics) {
        for (std::size_t i = 0; i < statics.size(); ++i) {
            Section p(statics[i], s.field("static_scatterers[" + std::to_string(i) + "]"), source, issues);
            const auto pos = p.vec3("position_m");
            const auto rcs = p.scalar<double>("rcs_m2");
            p.finish();
            p.require("rcs_m2", rcs.has_value());
            if (rcs && *rcs < 0.0)
                p.fail_key("rcs_m2", "must be non-negative");
            scene.static_scatterers.push_back({pos.value_or(Vec3{}), rcs.value_or(0.0)});
        }
    }
    s.finish();
}

void parse_dsp(Section s, RunConfig& cfg)
{
    auto& d = cfg.dsp;
    if (auto v = s.scalar<std::size_t>("subsample"))
        d.subsample = *v;
    for (const auto* key : {"window", "spacing_window"}) {
        if (auto v = s.scalar<std::string>(key)) {
            try {
                (std::string(key) == "window" ? d.window : d.spacing_window) = parse_window(*v);
            }
            catch (const std::exception& e) {
                s.fail_key(key, e.what());
            }
        }
    }
    if (const auto n = s.raw("range_bin")) {
        if (n.IsScalar() && n.Scalar() == "auto")
            d.range_bin.reset();
        else if (auto v = s.scalar<std::size_t>("range_bin"))
            d.range_bin = *v;
    }
    if (auto v = s.scalar<double>("peak_threshold_db"))
        d.peak_threshold_db = *v;
    if (auto v = s.scalar<double>("floor_margin_db"))
        d.floor_margin_db = *v;
    if (auto v = s.scalar<std::size_t>("smoothing_bins"))
        d.smoothing_bins = *v;
    s.finish();
}

void parse_output(Section s, RunConfig& cfg)
{
    auto& o = cfg.output;
    if (auto v = s.scalar<std::string>("directory"))
        o.directory = *v;
    if (auto v = s.scalar<std::string>("format")) {
        try {
            o.format = parse_output_format(*v);
        }
        catch (const std::exception& e) {
            s.fail_key("format", e.what());
        }
    }
    if (auto v = s.list<std::string>("payloads")) {
        o.spectrum = o.map = o.frames = false;
        for (const auto& p : *v) {
            if (p == "spectrum")
                o.spectrum = true;
            else if (p == "map")
                o.map = true;
            else if (p == "frames")
                o.frames = true;
            else
                s.fail_key("payloads", "unknown payload '" + p + "' (spectrum, map, frames)");
        }
    }
    if (const auto n = s.raw("map_bins")) {
        if (n.IsScalar() && n.Scalar() == "auto") {
            o.map_bins.reset();
        }
        else if (auto v = s.list<std::size_t>("map_bins"); v && v->size() == 2 && (*v)[0] >= 1 && (*v)[0] <= (*v)[1]) {
            o.map_bins = std::pair{(*v)[0], (*v)[1]};
        }
        else {
            s.fail_key("map_bins", "expected 'auto' or [first, last] with 1 <= first <= last");
        }
    }
    s.finish();
}

void parse_sweep(Section s, RunConfig& cfg)
{
    auto& sw = cfg.sweep;
    sw = {};
    const auto check = [&](const std::string& key, const auto& v) {
        if (v && v->empty())
            s.fail_key(key, "sweep lists must not be empty");
    };
    if (auto v = s.list<double>("bistatic_angle_deg")) {
        check("bistatic_angle_deg", v);
        for (double a : *v)
            sw.bistatic_angle.push_back(deg2rad(a));
    }
    if (auto v = s.list<double>("rotation_rate_rpm")) {
        check("rotation_rate_rpm", v);
        for (double r : *v)
            sw.rotation_rate.push_back(rpm2rad_s(r));
    }
    if (auto v = s.list<int>("blades")) {
        check("blades", v);
        sw.blades = *v;
    }
    if (auto v = s.list<double>("snr_db")) {
        check("snr_db", v);
        sw.snr_db = *v;
    }
    s.finish();
}

RunConfig parse_node(const YAML::Node& root, const std::string& source)
{
    std::vector<std::string> issues;
    RunConfig cfg;
    Section top(root, "", source, issues);
    if (!top.present())
        throw ConfigError({source + ": empty configuration"});

    (void)top.raw("preset");
    if (auto v = top.scalar<std::string>("name"))
        cfg.name = *v;
    if (auto v = top.scalar<std::uint64_t>("seed"))
        cfg.seed = *v;
    if (auto v = top.scalar<std::string>("mode")) {
        if (*v == "exact")
            cfg.mode = TimeMode::exact;
        else if (*v == "frozen")
            cfg.mode = TimeMode::frozen;
        else
            top.fail_key("mode", "expected 'exact' or 'frozen'");
    }
    if (auto v = top.scalar<std::string>("grid_file"))
        cfg.grid_file = *v;

    const auto section = [&](const std::string& key) {
        const auto n = top.raw(key);
        return Section(n, key, source, issues);
    };
    {
        auto s = section("ofdm");
        if (!s.present())
            top.fail_key("ofdm", "is required");
        else
            parse_ofdm(std::move(s), cfg);
    }
    {
        auto s = section("geometry");
        if (!s.present())
            top.fail_key("geometry", "is required");
        else
            parse_geometry(std::move(s), cfg);
    }
    {
        auto s = section("scene");
        if (!s.present())
            top.fail_key("scene", "is required");
        else
            parse_scene(std::move(s), cfg, source, issues);
    }
    parse_dsp(section("dsp"), cfg);
    parse_output(section("output"), cfg);
    parse_sweep(section("sweep"), cfg);
    top.finish();

    if (!issues.empty())
        throw ConfigError(std::move(issues));
    cfg.validate();
    return cfg;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> issues)
    : std::runtime_error([&] {
          std::string msg = "invalid configuration:";
          for (const auto& i : issues)
              msg += "\n  " + i;
          return msg;
      }()),
      issues_(std::move(issues))
{
}

BistaticGeometry GeometrySpec::build(std::optional<double> beta_override) const
{
    if (bistatic_angle || beta_override)
        return BistaticGeometry::from_bistatic_angle(tx_range, rx_range, zenith,
                                                     beta_override.value_or(bistatic_angle.value_or(0.0)),
                                                     tx_azimuth);
    BistaticGeometry g{tx_range, rx_range, zenith, rx_zenith, tx_azimuth, rx_azimuth};
    g.validate();
    return g;
}

OutputFormat parse_output_format(const std::string& name)
{
    if (name == "binary")
        return OutputFormat::binary;
    if (name == "csv")
        return OutputFormat::csv;
    throw std::invalid_argument("unknown output format '" + name + "' (binary, csv)");
}

std::string to_string(OutputFormat f)
{
    return f == OutputFormat::binary ? "binary" : "csv";
}

std::size_t SweepSpec::size() const
{
    const auto n = [](std::size_t k) { return k == 0 ? std::size_t{1} : k; };
    return n(bistatic_angle.size()) * n(rotation_rate.size()) * n(blades.size()) * n(snr_db.size());
}

void RunConfig::validate() const
{
    std::vector<std::string> issues;
    const auto guard = [&](const std::string& what, auto&& fn) {
        try {
            fn();
        }
        catch (const std::exception& e) {
            issues.push_back(what + ": " + e.what());
        }
    };
    guard("ofdm", [&] { ofdm.validate(); });
    if (dsp.subsample == 0)
        issues.push_back("dsp.subsample: must be at least 1");
    else if (dsp.subsample > ofdm.n_symbols / 2)
        issues.push_back("dsp.subsample: leaves fewer than two slow-time samples");
    if (dsp.smoothing_bins == 0)
        issues.push_back("dsp.smoothing_bins: must be at least 1");
    if (dsp.range_bin && (*dsp.range_bin == 0 || *dsp.range_bin >= ofdm.n_subcarriers))
        issues.push_back("dsp.range_bin: outside 1..total_subcarriers-1");
    if (output.map_bins && output.map_bins->second >= ofdm.n_subcarriers)
        issues.push_back("output.map_bins: outside 1..total_subcarriers-1");
    if (!output.spectrum && !output.map && !output.frames)
        issues.push_back("output.payloads: select at least one payload");
    if (!sweep.bistatic_angle.empty() && !geometry.bistatic_angle)
        issues.push_back("sweep.bistatic_angle_deg: needs geometry.bistatic_angle_<unit>");
    if ((!sweep.rotation_rate.empty() || !sweep.blades.empty()) && scene.propellers.empty())
        issues.push_back("sweep: rotor sweeps need at least one propeller");

    // Each sweep point must validate; the base point covers the unswept case.
    std::vector<double> betas = sweep.bistatic_angle;
    if (betas.empty())
        betas.push_back(geometry.bistatic_angle.value_or(std::numeric_limits<double>::quiet_NaN()));
    for (const double beta : betas) {
        guard("geometry", [&] {
            const auto g = std::isnan(beta) ? geometry.build() : geometry.build(beta);
            scene.validate(g);
        });
    }
    for (const int b : sweep.blades) {
        if (b < 1)
            issues.push_back("sweep.blades: blade counts must be positive");
    }
    if (!issues.empty())
        throw ConfigError(std::move(issues));
}

std::string RunPoint::label() const
{
    std::ostringstream os;
    os << "beta=" << bistatic_angle_deg << "deg rpm=" << rotation_rate_rpm << " blades=" << blades
       << " snr=" << snr_db << "dB";
    return os.str();
}

std::vector<std::string> preset_names()
{
    return {"setup1", "setup2"};
}

std::string preset_yaml(const std::string& name)
{
    if (name == "setup1")
        return kSetup1;
    if (name == "setup2")
        return kSetup2;
    throw ConfigError({"unknown preset '" + name + "' (setup1, setup2)"});
}

RunConfig preset_config(const std::string& name)
{
    return parse_config(preset_yaml(name), "preset:" + name);
}

RunConfig parse_config(const std::string& text, const std::string& source)
{
    YAML::Node root;
    try {
        root = YAML::Load(text);
    }
    catch (const YAML::ParserException& e) {
        throw ConfigError({source + ":" + std::to_string(e.mark.line + 1) + ": parse error: " + e.msg});
    }
    if (root.IsMap() && root["preset"]) {
        const auto preset = root["preset"];
        if (!preset.IsScalar())
            throw ConfigError({where(preset, source) + ": preset: expected a name"});
        YAML::Node base = YAML::Load(preset_yaml(preset.Scalar()));
        merge_into(base, root);
        base.remove("preset");
        return parse_node(base, source);
    }
    return parse_node(root, source);
}

RunConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError({path.string() + ": cannot open file"});
    std::stringstream buf;
    buf << in.rdbuf();
    auto cfg = parse_config(buf.str(), path.string());
    if (!cfg.grid_file.empty() && cfg.grid_file.is_relative())
        cfg.grid_file = path.parent_path() / cfg.grid_file;
    return cfg;
}

double noise_power_from_snr(double snr_db)
{
    return std::pow(10.0, -snr_db / 10.0);
}

std::uint64_t point_seed(std::uint64_t run_seed, std::size_t index)
{
    return splitmix64(run_seed ^ splitmix64(static_cast<std::uint64_t>(index)));
}

std::vector<RunPoint> expand_sweep(const RunConfig& cfg)
{
    const auto or_base = [](auto list, auto base) {
        if (list.empty())
            list.push_back(base);
        return list;
    };
    const bool has_rotor = !cfg.scene.propellers.empty();
    const auto& first = has_rotor ? cfg.scene.propellers.front() : Propeller{};

    const std::vector<std::optional<double>> betas = [&] {
        std::vector<std::optional<double>> out;
        for (double b : cfg.sweep.bistatic_angle)
            out.emplace_back(b);
        if (out.empty())
            out.emplace_back(std::nullopt);
        return out;
    }();
    const std::vector<std::optional<double>> rates = [&] {
        std::vector<std::optional<double>> out;
        for (double r : cfg.sweep.rotation_rate)
            out.emplace_back(r);
        if (out.empty())
            out.emplace_back(std::nullopt);
        return out;
    }();
    const auto blades = or_base(std::vector<std::optional<int>>(cfg.sweep.blades.begin(), cfg.sweep.blades.end()),
                                std::optional<int>{});
    const auto snrs = or_base(std::vector<std::optional<double>>(cfg.sweep.snr_db.begin(), cfg.sweep.snr_db.end()),
                              std::optional<double>{});

    std::vector<RunPoint> points;
    for (const auto& beta : betas) {
        for (const auto& rate : rates) {
            for (const auto& nb : blades) {
                for (const auto& snr : snrs) {
                    RunPoint p;
                    p.index = points.size();
                    p.geometry = cfg.geometry.build(beta);
                    p.scene = cfg.scene;
                    for (auto& prop : p.scene.propellers) {
                        if (rate)
                            prop.rotation_rate = *rate;
                        if (nb)
                            prop.n_blades = *nb;
                    }
                    if (snr)
                        p.scene.noise_power = noise_power_from_snr(*snr);
                    p.seed = point_seed(cfg.seed, p.index);
                    p.scene.rng_seed = p.seed;
                    p.bistatic_angle_deg = rad2deg(p.geometry.bistatic_angle());
                    p.rotation_rate_rpm = has_rotor ? rad_s2rpm(rate.value_or(first.rotation_rate)) : 0.0;
                    p.blades = has_rotor ? nb.value_or(first.n_blades) : 0;
                    p.snr_db = p.scene.snr_db();
                    points.push_back(std::move(p));
                }
            }
        }
    }
    return points;
}

ModulationGrid load_grid(const RunConfig& cfg)
{
    if (cfg.grid_file.empty())
        return newman_grid(cfg.ofdm);
    auto grid = grid_from_binary(read_binary(cfg.grid_file), cfg.ofdm.n_symbols);
    if (grid.n_subcarriers() != cfg.ofdm.n_subcarriers)
        throw ConfigError({cfg.grid_file.string() + ": grid has " + std::to_string(grid.n_subcarriers()) +
                           " subcarriers, configuration has " + std::to_string(cfg.ofdm.n_subcarriers)});
    return grid;
}

}  // namespace rotorsim
