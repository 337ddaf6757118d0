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


// rotorsim: command-line front end.
//
//   rotorsim simulate --preset setup1 --output out/
//   rotorsim sweep    --config sweep.yaml --seed 3
//   rotorsim analyze  out/setup1_0000_spectrum_c5.bin
//   rotorsim analyze  out/manifest.json
//   rotorsim validate

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>

#include "rotorsim/batch.hpp"
#include "rotorsim/binary_format.hpp"
#include "rotorsim/validation.hpp"

namespace {

using namespace rotorsim;

struct RunFlags
{
    std::string config;
    std::string preset;
    std::string output;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> subsample;
    std::string format;
    bool quiet{false};
};

void add_run_flags(CLI::App* cmd, RunFlags& f)
{
    auto* config = cmd->add_option("-c,--config", f.config, "YAML run configuration")->check(CLI::ExistingFile);
    cmd->add_option("-p,--preset", f.preset, "built-in preset (setup1, setup2)")->excludes(config);
    cmd->add_option("-o,--output", f.output, "output directory (overrides the config)");
    cmd->add_option("-s,--seed", f.seed, "run seed (overrides the config)");
    cmd->add_option("--subsample", f.subsample, "slow-time subsampling factor (overrides the config)");
    cmd->add_option("-f,--format", f.format, "payload format")->check(CLI::IsMember({"binary", "csv"}));
    cmd->add_flag("-q,--quiet", f.quiet, "only print failures");
}

RunConfig resolve(const RunFlags& f)
{
    if (f.config.empty() && f.preset.empty())
        throw CLI::ValidationError("--config or --preset", "one of them is required");
    RunConfig cfg = f.config.empty() ? preset_config(f.preset) : load_config(f.config);
    if (!f.output.empty())
        cfg.output.directory = f.output;
    if (f.seed)
        cfg.seed = *f.seed;
    if (f.subsample)
        cfg.dsp.subsample = *f.subsample;
    if (!f.format.empty())
        cfg.output.format = parse_output_format(f.format);
    cfg.validate();
    return cfg;
}

void print_metrics(const SpectrumMetrics& m)
{
    std::printf("    cell %zu", m.range_bin);
    if (m.propeller)
        std::printf(" (rotor %zu)", *m.propeller);
    if (m.impulse_spacing)
        std::printf("  spacing %.2f Hz", *m.impulse_spacing);
    else
        std::printf("  spacing n/a");
    if (m.expected_spacing)
        std::printf(" [expected %.2f]", *m.expected_spacing);
    std::printf("  spread %.1f Hz  edge %.1f Hz", m.spread, m.edge);
    if (m.predicted_doppler)
        std::printf(" [predicted %.1f]", *m.predicted_doppler);
    std::printf("\n");
}

int run(const RunFlags& flags, bool single)
{
    const auto cfg = resolve(flags);
    BatchOptions opts;
    opts.single = single;
    opts.progress = [&](const SignatureRecord& r) {
        if (!r.ok) {
            std::fprintf(stderr, "run %zu (%s) failed: %s\n", r.point.index, r.point.label().c_str(),
                         r.error.c_str());
            return;
        }
        if (flags.quiet)
            return;
        std::printf("run %zu  %s\n", r.point.index, r.point.label().c_str());
        for (const auto& m : r.metrics)
            print_metrics(m);
    };
    const auto result = run_batch(cfg, opts);
    std::size_t failed = 0;
    for (const auto& r : result.records)
        failed += r.ok ? 0 : 1;
    if (!flags.quiet || failed)
        std::printf("%zu run(s), %zu failed; manifest %s\n", result.records.size(), failed,
                    result.manifest.string().c_str());
    return result.all_ok() ? 0 : 1;
}

int analyze(const std::string& path_str, double threshold_db, double margin_db, std::optional<std::size_t> bin)
{
    const std::filesystem::path path(path_str);
    if (path.extension() == ".json") {
        const auto problems = verify_manifest(path);
        for (const auto& p : problems)
            std::printf("FAIL %s\n", p.c_str());
        if (problems.empty())
            std::printf("manifest verified: every file present with matching hash\n");
        return problems.empty() ? 0 : 1;
    }

    const auto report = [&](const DopplerSpectrum& spec, const std::string& what) {
        std::printf("%s: %zu bins, %.4f Hz/bin\n", what.c_str(), spec.size(), spec.bin_width);
        try {
            std::printf("  impulse spacing %.3f Hz\n", impulse_spacing(spec, threshold_db));
        }
        catch (const MetricError& e) {
            std::printf("  impulse spacing n/a (%s)\n", e.what());
        }
        const auto sup = doppler_support(spec, {margin_db, SupportOptions{}.smoothing_bins});
        std::printf("  Doppler support [%.2f, %.2f] Hz, spread %.2f Hz, edge %.2f Hz\n", sup.lower_edge, sup.upper_edge,
                    sup.width, sup.edge());
    };

    if (path.extension() == ".csv") {
        report(read_spectrum_csv(path), path.filename().string());
        return 0;
    }
    const auto m = read_binary(path);
    if (m.kind == PayloadKind::doppler_spectrum) {
        report(spectrum_from_binary(m), path.filename().string());
        return 0;
    }
    if (m.kind == PayloadKind::range_doppler_map) {
        const auto map = map_from_binary(m);
        std::printf("range-Doppler map: cells %zu..%zu, %zu Doppler bins\n", map.first_range_bin,
                    map.first_range_bin + map.n_range - 1, map.n_doppler);
        if (bin) {
            report(map.row(*bin), "cell " + std::to_string(*bin));
            return 0;
        }
        // Without a cell, list the cells holding the most off-DC energy.
        std::vector<std::pair<double, std::size_t>> energy;
        for (std::size_t r = 0; r < map.n_range; ++r) {
            double e = 0.0;
            for (std::size_t d = 0; d < map.n_doppler; ++d) {
                if (d != map.zero_bin())
                    e += map.at(r, d) * map.at(r, d);
            }
            energy.emplace_back(e, map.first_range_bin + r);
        }
        std::sort(energy.rbegin(), energy.rend());
        for (std::size_t i = 0; i < std::min<std::size_t>(4, energy.size()); ++i)
            report(map.row(energy[i].second),
                   "cell " + std::to_string(energy[i].second) + " (" +
                       std::to_string(map.range_of_bin(energy[i].second)) + " m)");
        return 0;
    }
    std::printf("%s: payload kind %u, %llu x %llu, nothing to analyze\n", path.filename().string().c_str(),
                static_cast<unsigned>(m.kind), static_cast<unsigned long long>(m.rows),
                static_cast<unsigned long long>(m.cols));
    return 0;
}

int validate()
{
    bool ok = true;
    for (const auto& r : run_self_checks()) {
        std::printf("%s %s (%s)\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
        ok = ok && r.passed;
    }
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Bistatic OFDM micro-Doppler simulator for drone propellers"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "rotorsim 0.1.0");

    RunFlags sim_flags;
    auto* simulate = app.add_subcommand("simulate", "run the base point of a configuration");
    add_run_flags(simulate, sim_flags);

    RunFlags sweep_flags;
    auto* sweep = app.add_subcommand("sweep", "run every point of the configured sweep");
    add_run_flags(sweep, sweep_flags);

    std::string payload;
    double threshold_db = PeakOptions{}.threshold_db;
    double margin_db = SupportOptions{}.floor_margin_db;
    std::optional<std::size_t> bin;
    auto* analyze_cmd = app.add_subcommand("analyze", "metrics of a payload file, or verify a manifest");
    analyze_cmd->add_option("payload", payload, "spectrum/map (.bin, .csv) or manifest.json")
        ->required()
        ->check(CLI::ExistingFile);
    analyze_cmd->add_option("--threshold-db", threshold_db, "peak threshold above the median");
    analyze_cmd->add_option("--floor-margin-db", margin_db, "support threshold above the floor");
    analyze_cmd->add_option("--range-bin", bin, "map row to analyze");

    auto* validate_cmd = app.add_subcommand("validate", "run the built-in oracle and invariant checks");

    CLI11_PARSE(app, argc, argv);
    try {
        if (simulate->parsed())
            return run(sim_flags, true);
        if (sweep->parsed())
            return run(sweep_flags, false);
        if (analyze_cmd->parsed())
            return analyze(payload, threshold_db, margin_db, bin);
        if (validate_cmd->parsed())
            return validate();
    }
    catch (const CLI::Error& e) {
        return app.exit(e);
    }
    catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
