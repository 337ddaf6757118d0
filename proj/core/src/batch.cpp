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


#include "rotorsim/batch.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "rotorsim/binary_format.hpp"

namespace rotorsim {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::size_t kMapMargin = 8;

double static_range(const BistaticGeometry& geom, const Vec3& p)
{
    return (geom.tx_position() - p).norm() + (geom.rx_position() - p).norm();
}

std::string file_stem(const RunConfig& cfg, std::size_t index)
{
    std::ostringstream os;
    os << cfg.name << '_' << std::setw(4) << std::setfill('0') << index;
    return os.str();
}

Json finite_or_null(double v)
{
    return std::isfinite(v) ? Json(v) : Json(nullptr);
}

template <typename T>
Json optional_json(const std::optional<T>& v)
{
    return v ? Json(*v) : Json(nullptr);
}

Json record_json(const SignatureRecord& r)
{
    Json j;
    j["index"] = r.point.index;
    j["label"] = r.point.label();
    j["status"] = r.ok ? "ok" : "failed";
    j["error"] = r.ok ? Json(nullptr) : Json(r.error);
    j["seed"] = r.point.seed;
    j["labels"] = {
        {"bistatic_angle_deg", r.point.bistatic_angle_deg},
        {"rotation_rate_rpm", r.point.rotation_rate_rpm},
        {"blades", r.point.blades},
        {"snr_db", finite_or_null(r.point.snr_db)},
    };
    Json metrics = Json::array();
    for (const auto& m : r.metrics) {
        metrics.push_back({
            {"range_bin", m.range_bin},
            {"propeller", optional_json(m.propeller)},
            {"impulse_spacing_hz", optional_json(m.impulse_spacing)},
            {"spacing_note", m.spacing_note.empty() ? Json(nullptr) : Json(m.spacing_note)},
            {"expected_spacing_hz", optional_json(m.expected_spacing)},
            {"doppler_spread_hz", m.spread},
            {"doppler_edge_hz", m.edge},
            {"predicted_doppler_hz", optional_json(m.predicted_doppler)},
        });
    }
    j["metrics"] = std::move(metrics);
    Json files = Json::array();
    for (const auto& f : r.files)
        files.push_back({{"kind", f.kind}, {"path", f.path.generic_string()}, {"bytes", f.bytes}, {"sha256", f.sha256}});
    j["files"] = std::move(files);
    return j;
}

PayloadFile write_payload(const std::filesystem::path& dir, const std::string& name, const std::string& kind,
                          OutputFormat format, const auto& product)
{
    PayloadFile f;
    f.kind = kind;
    f.path = name + (format == OutputFormat::binary ? ".bin" : ".csv");
    const auto full = dir / f.path;
    if (format == OutputFormat::binary)
        write_binary(full, to_binary(product));
    else
        write_csv(full, product);
    f.sha256 = sha256_file(full);
    f.bytes = std::filesystem::file_size(full);
    return f;
}

}  // namespace

bool BatchResult::all_ok() const
{
    return std::all_of(records.begin(), records.end(), [](const auto& r) { return r.ok; });
}

std::vector<std::pair<std::size_t, std::optional<std::size_t>>> analysis_bins(const RunConfig& cfg,
                                                                             const RunPoint& point)
{
    std::vector<std::pair<std::size_t, std::optional<std::size_t>>> bins;
    const auto& props = point.scene.propellers;
    std::vector<std::size_t> hub_cells;
    for (const auto& p : props)
        hub_cells.push_back(range_cell(cfg.ofdm, rotor_echo_in_scene(p, point.geometry).factors.total_range));

    if (cfg.dsp.range_bin) {
        std::optional<std::size_t> owner;
        for (std::size_t i = 0; i < hub_cells.size() && !owner; ++i) {
            if (hub_cells[i] == *cfg.dsp.range_bin)
                owner = i;
        }
        bins.emplace_back(*cfg.dsp.range_bin, owner);
        return bins;
    }
    for (std::size_t i = 0; i < hub_cells.size(); ++i)
        bins.emplace_back(hub_cells[i], i);
    if (bins.empty() && !point.scene.static_scatterers.empty()) {
        const double r = static_range(point.geometry, point.scene.static_scatterers.front().position);
        bins.emplace_back(range_cell(cfg.ofdm, r), std::nullopt);
    }
    return bins;
}

std::pair<std::size_t, std::size_t> scene_cell_span(const RunConfig& cfg, const RunPoint& point)
{
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (const auto& p : point.scene.propellers) {
        const auto echo = rotor_echo_in_scene(p, point.geometry);
        const double reach = echo.factors.amplitude * p.blade_length;
        lo = std::min(lo, echo.factors.total_range - reach);
        hi = std::max(hi, echo.factors.total_range + reach);
    }
    for (const auto& s : point.scene.static_scatterers) {
        const double r = static_range(point.geometry, s.position);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    const std::size_t n = cfg.ofdm.n_subcarriers;
    const std::size_t first = range_cell(cfg.ofdm, std::max(lo, 0.0));
    const std::size_t last = range_cell(cfg.ofdm, std::max(hi, 0.0));
    return {first > kMapMargin ? first - kMapMargin : 1, std::min(n - 1, last + kMapMargin)};
}

PointProducts simulate_point(const RunConfig& cfg, const RunPoint& point, const ModulationGrid& grid, bool with_map)
{
    PointProducts out;
    SimulationOptions sim;
    sim.symbol_stride = cfg.dsp.subsample;
    sim.mode = cfg.mode;
    out.frames = simulate_scene(point.scene, point.geometry, cfg.ofdm, grid, sim);

    const double center = cfg.ofdm.carrier_frequency + cfg.ofdm.sampled_bandwidth() / 2.0;
    const double wavelength = kSpeedOfLight / center;
    const PeakOptions peaks{cfg.dsp.peak_threshold_db, 2};
    const SupportOptions support{cfg.dsp.floor_margin_db, cfg.dsp.smoothing_bins};

    for (const auto& [bin, owner] : analysis_bins(cfg, point)) {
        const auto slow = slow_time_extract(out.frames, bin, cfg.dsp.subsample);
        auto spec = doppler_spectrum(slow, cfg.dsp.window);
        SpectrumMetrics m;
        m.range_bin = bin;
        m.propeller = owner;
        const auto spacing_spec =
            cfg.dsp.spacing_window == cfg.dsp.window ? spec : doppler_spectrum(slow, cfg.dsp.spacing_window);
        try {
            m.impulse_spacing = impulse_spacing(spacing_spec, peaks);
        }
        catch (const MetricError& e) {
            m.spacing_note = e.what();
        }
        const auto sup = doppler_support(spec, support);
        m.spread = sup.width;
        m.edge = sup.edge();
        if (owner) {
            const auto& prop = point.scene.propellers[*owner];
            const auto echo = rotor_echo_in_scene(prop, point.geometry);
            m.expected_spacing = prop.n_blades * prop.rotation_frequency();
            m.predicted_doppler =
                predict_bistatic_doppler(prop.tip_speed(), echo.factors.bistatic_angle, 0.0, wavelength);
        }
        out.metrics.push_back(std::move(m));
        out.spectra.push_back(std::move(spec));
    }

    if (with_map) {
        const auto span = cfg.output.map_bins.value_or(scene_cell_span(cfg, point));
        out.map = range_doppler_map(out.frames, cfg.dsp.subsample, cfg.dsp.window, span.first, span.second);
    }
    return out;
}

BatchResult run_batch(const RunConfig& cfg, const BatchOptions& options)
{
    cfg.validate();
    const auto& dir = cfg.output.directory;
    std::filesystem::create_directories(dir);

    auto points = expand_sweep(cfg);
    if (options.single)
        points.resize(1);

    BatchResult result;
    std::optional<ModulationGrid> grid;
    std::string grid_error;
    try {
        grid = load_grid(cfg);
    }
    catch (const std::exception& e) {
        grid_error = e.what();
    }

    for (const auto& point : points) {
        SignatureRecord rec;
        rec.point = point;
        try {
            if (!grid)
                throw std::runtime_error(grid_error);
            const auto products = simulate_point(cfg, point, *grid, cfg.output.map);
            rec.metrics = products.metrics;
            const auto stem = file_stem(cfg, point.index);
            if (cfg.output.spectrum) {
                for (std::size_t i = 0; i < products.spectra.size(); ++i) {
                    const auto name = stem + "_spectrum_c" + std::to_string(products.metrics[i].range_bin);
                    rec.files.push_back(write_payload(dir, name, "spectrum", cfg.output.format, products.spectra[i]));
                }
            }
            if (products.map)
                rec.files.push_back(write_payload(dir, stem + "_map", "map", cfg.output.format, *products.map));
            if (cfg.output.frames)
                rec.files.push_back(write_payload(dir, stem + "_frames", "frames", cfg.output.format, products.frames));
            rec.ok = true;
        }
        catch (const std::exception& e) {
            rec.ok = false;
            rec.error = e.what();
        }
        if (options.progress)
            options.progress(rec);
        result.records.push_back(std::move(rec));
    }

    Json manifest;
    manifest["format"] = "rotorsim-manifest";
    manifest["version"] = 1;
    manifest["name"] = cfg.name;
    manifest["seed"] = cfg.seed;
    manifest["payload_format"] = to_string(cfg.output.format);
    manifest["ofdm"] = {
        {"carrier_frequency_hz", cfg.ofdm.carrier_frequency},
        {"total_subcarriers", cfg.ofdm.n_subcarriers},
        {"active_first", cfg.ofdm.active_first},
        {"active_subcarriers", cfg.ofdm.active_count},
        {"symbol_duration_s", cfg.ofdm.symbol_duration},
        {"symbols", cfg.ofdm.n_symbols},
        {"subsample", cfg.dsp.subsample},
        {"time_mode", cfg.mode == TimeMode::exact ? "exact" : "frozen"},
    };
    manifest["all_ok"] = result.all_ok();
    Json records = Json::array();
    for (const auto& r : result.records)
        records.push_back(record_json(r));
    manifest["records"] = std::move(records);

    result.manifest = dir / "manifest.json";
    std::ofstream out(result.manifest, std::ios::trunc);
    out << manifest.dump(2) << '\n';
    out.flush();
    if (!out)
        throw std::runtime_error("cannot write '" + result.manifest.string() + "'");
    return result;
}

std::vector<std::string> verify_manifest(const std::filesystem::path& manifest)
{
    std::vector<std::string> problems;
    std::ifstream in(manifest);
    if (!in)
        return {"cannot open '" + manifest.string() + "'"};
    Json j;
    try {
        j = Json::parse(in);
    }
    catch (const Json::exception& e) {
        return {"manifest is not valid JSON: " + std::string(e.what())};
    }
    if (j.value("format", "") != "rotorsim-manifest" || !j.contains("records"))
        return {"not a rotorsim manifest"};

    const auto dir = manifest.parent_path();
    for (const auto& rec : j["records"]) {
        if (rec.value("status", "") != "ok")
            problems.push_back("record " + std::to_string(rec.value("index", 0)) + " failed: " +
                               (rec["error"].is_string() ? rec["error"].get<std::string>() : "unknown error"));
        for (const auto& f : rec["files"]) {
            const auto path = dir / f.value("path", "");
            if (!std::filesystem::exists(path)) {
                problems.push_back(path.string() + ": missing");
                continue;
            }
            if (sha256_file(path) != f.value("sha256", ""))
                problems.push_back(path.string() + ": hash mismatch");
        }
    }
    return problems;
}

}  // namespace rotorsim
