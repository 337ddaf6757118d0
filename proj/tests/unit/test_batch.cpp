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

#include <filesystem>
#include <fstream>
#include <iterator>

#include <unistd.h>

#include <json.hpp>

#include "rotorsim/batch.hpp"
#include "rotorsim/binary_format.hpp"

using namespace rotorsim;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

RunConfig small_sweep(const fs::path& dir)
{
    auto cfg = parse_config(R"(
name: small
seed: 3
ofdm:
  center_frequency_ghz: 3.7
  total_subcarriers: 160
  active_subcarriers: 128
  symbol_duration_us: 8
  symbols: 2048
geometry:
  tx_range_m: 3
  rx_range_m: 3
  bistatic_angle_deg: 30
scene:
  snr_db: 30
  propellers:
    - blade_length_cm: 16.55
      rotation_rate_rpm: 1500
      rcs_density_m2_per_m: 0.01
  static_scatterers:
    - position_m: [0, 0, 0]
      rcs_m2: 0.01
dsp:
  subsample: 4
sweep:
  bistatic_angle_deg: [30, 60, 90, 120, 150, 180]
  blades: [2, 3, 4]
output:
  payloads: [spectrum, map]
)");
    cfg.output.directory = dir;
    return cfg;
}

struct TempDir
{
    fs::path path;
    explicit TempDir(const std::string& tag)
        : path(fs::temp_directory_path() / ("rotorsim_" + tag + "_" + std::to_string(::getpid())))
    {
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_SUITE("batch")
{
    TEST_CASE("sweep produces one labelled record per point")
    {
        TempDir tmp("batch");
        const auto cfg = small_sweep(tmp.path);
        std::size_t calls = 0;
        BatchOptions opts;
        opts.progress = [&](const SignatureRecord& r) { CHECK(r.point.index == calls++); };
        const auto result = run_batch(cfg, opts);
        CHECK(calls == 18);
        REQUIRE(result.records.size() == 18);
        CHECK(result.all_ok());
        CHECK(result.manifest == tmp.path / "manifest.json");
        const auto& r = result.records[4];
        CHECK(r.point.label() == "beta=60deg rpm=1500 blades=3 snr=30dB");
        REQUIRE(r.metrics.size() == 1);
        CHECK(r.metrics[0].range_bin == 1);
        CHECK(r.metrics[0].expected_spacing.value() == doctest::Approx(75.0));
        REQUIRE(r.files.size() == 2);
        CHECK(r.files[0].kind == "spectrum");
        CHECK(r.files[1].kind == "map");
        const auto spec = spectrum_from_binary(read_binary(tmp.path / r.files[0].path));
        CHECK(spec.size() == 512);

        std::ifstream in(result.manifest);
        const auto j = nlohmann::json::parse(in);
        CHECK(j["format"] == "rotorsim-manifest");
        CHECK(j["all_ok"] == true);
        CHECK(j["records"].size() == 18);
        CHECK(j["records"][4]["label"] == r.point.label());
        CHECK(verify_manifest(result.manifest).empty());
    }

    TEST_CASE("single mode runs only the base point")
    {
        TempDir tmp("single");
        BatchOptions opts;
        opts.single = true;
        const auto result = run_batch(small_sweep(tmp.path), opts);
        REQUIRE(result.records.size() == 1);
        CHECK(result.records[0].point.bistatic_angle_deg == doctest::Approx(30));
    }

    TEST_CASE("identical configs give byte-identical payloads")
    {
        TempDir a("det_a");
        TempDir b("det_b");
        auto cfg = small_sweep(a.path);
        cfg.sweep.blades.clear();
        cfg.output.frames = true;
        const auto ra = run_batch(cfg);
        cfg.output.directory = b.path;
        const auto rb = run_batch(cfg);
        REQUIRE(ra.records.size() == rb.records.size());
        for (std::size_t i = 0; i < ra.records.size(); ++i) {
            REQUIRE(ra.records[i].files.size() == 3);
            for (std::size_t f = 0; f < ra.records[i].files.size(); ++f) {
                CHECK(ra.records[i].files[f].sha256 == rb.records[i].files[f].sha256);
                CHECK(slurp(a.path / ra.records[i].files[f].path) == slurp(b.path / rb.records[i].files[f].path));
            }
        }
    }

    TEST_CASE("csv output")
    {
        TempDir tmp("csv");
        auto cfg = small_sweep(tmp.path);
        cfg.sweep = {};
        cfg.output.format = OutputFormat::csv;
        const auto result = run_batch(cfg);
        REQUIRE(result.records.size() == 1);
        const auto& file = result.records[0].files[0];
        CHECK(file.path.extension() == ".csv");
        CHECK(read_spectrum_csv(tmp.path / file.path).size() == 512);
    }

    TEST_CASE("a failing point is recorded and the batch continues")
    {
        TempDir tmp("fail");
        auto cfg = small_sweep(tmp.path);
        cfg.sweep.blades.clear();
        cfg.grid_file = tmp.path / "no_such_grid.bin";
        const auto result = run_batch(cfg);
        CHECK(result.records.size() == 6);
        CHECK_FALSE(result.all_ok());
        for (const auto& r : result.records) {
            CHECK_FALSE(r.ok);
            CHECK(r.error.find("no_such_grid") != std::string::npos);
        }
        const auto problems = verify_manifest(result.manifest);
        CHECK(problems.size() == 6);
    }

    TEST_CASE("verify_manifest detects tampering")
    {
        TempDir tmp("tamper");
        auto cfg = small_sweep(tmp.path);
        cfg.sweep = {};
        const auto result = run_batch(cfg);
        REQUIRE(verify_manifest(result.manifest).empty());
        const auto target = tmp.path / result.records[0].files[0].path;
        {
            std::fstream f(target, std::ios::in | std::ios::out | std::ios::binary);
            f.seekp(100);
            f.put('\x7f');
        }
        auto problems = verify_manifest(result.manifest);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0].find("hash mismatch") != std::string::npos);
        fs::remove(target);
        problems = verify_manifest(result.manifest);
        REQUIRE(problems.size() == 1);
        CHECK(problems[0].find("missing") != std::string::npos);
        CHECK_FALSE(verify_manifest(tmp.path / "nope.json").empty());
    }

    TEST_CASE("analysis bins follow the rotor hubs")
    {
        const auto cfg = preset_config("setup2");
        const auto points = expand_sweep(cfg);
        const auto bins = analysis_bins(cfg, points[0]);
        REQUIRE(bins.size() == 2);
        CHECK(bins[0].second == 0u);
        CHECK(bins[1].second == 1u);
        CHECK(bins[0].first != bins[1].first);
        const auto span = scene_cell_span(cfg, points[0]);
        CHECK(span.first <= std::min(bins[0].first, bins[1].first) - 8);
        CHECK(span.second >= std::max(bins[0].first, bins[1].first) + 8);
    }
}
