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


#include <benchmark/benchmark.h>

#include <random>

#include "rotorsim/config.hpp"

using namespace rotorsim;

namespace {

const RunConfig& setup1()
{
    static const RunConfig cfg = preset_config("setup1");
    return cfg;
}

RotorEcho setup1_echo()
{
    const auto& cfg = setup1();
    const auto point = expand_sweep(cfg).front();
    return rotor_echo_in_scene(point.scene.propellers.front(), point.geometry);
}

void BM_ClosedFormFrame(benchmark::State& state)
{
    const auto& cfg = setup1();
    const auto grid = newman_grid(cfg.ofdm);
    const auto echo = setup1_echo();
    std::size_t m = 0;
    for (auto _ : state) {
        auto frame = closed_form_returns(echo, cfg.ofdm, grid, m);
        benchmark::DoNotOptimize(frame.samples.data());
        m = (m + 97) % cfg.ofdm.n_symbols;
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_ClosedFormFrame);

void BM_PointOracleFrame(benchmark::State& state)
{
    const auto& cfg = setup1();
    const auto grid = newman_grid(cfg.ofdm);
    const auto echo = setup1_echo();
    const auto k = static_cast<std::size_t>(state.range(0));
    std::size_t m = 0;
    for (auto _ : state) {
        auto frame = point_oracle_returns(k, echo, cfg.ofdm, grid, m);
        benchmark::DoNotOptimize(frame.samples.data());
        m = (m + 97) % cfg.ofdm.n_symbols;
    }
}
BENCHMARK(BM_PointOracleFrame)->Arg(64)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_DopplerSpectrum(benchmark::State& state)
{
    SlowTimeSignal sig;
    sig.slow_time_rate = 15625.0;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    for (int64_t i = 0; i < state.range(0); ++i)
        sig.samples.emplace_back(nd(rng), nd(rng));
    for (auto _ : state) {
        auto spec = doppler_spectrum(sig, Window::hann);
        benchmark::DoNotOptimize(spec.magnitude.data());
    }
    state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_DopplerSpectrum)->RangeMultiplier(4)->Range(1 << 10, 1 << 16)->Complexity(benchmark::oNLogN);

void BM_Setup1Scene(benchmark::State& state)
{
    const auto& cfg = setup1();
    const auto point = expand_sweep(cfg).front();
    const auto grid = newman_grid(cfg.ofdm);
    SimulationOptions opt;
    opt.symbol_stride = static_cast<std::size_t>(state.range(0));
    for (auto _ : state) {
        auto frames = simulate_scene(point.scene, point.geometry, cfg.ofdm, grid, opt);
        benchmark::DoNotOptimize(frames.frames.data());
    }
}
BENCHMARK(BM_Setup1Scene)->Arg(8)->Arg(1)->Unit(benchmark::kMillisecond)->Iterations(2);

void BM_SupportAndSpacing(benchmark::State& state)
{
    const auto& cfg = setup1();
    const auto point = expand_sweep(cfg).front();
    SimulationOptions opt;
    opt.symbol_stride = cfg.dsp.subsample;
    const auto frames = simulate_scene(point.scene, point.geometry, cfg.ofdm, newman_grid(cfg.ofdm), opt);
    const auto spec = doppler_spectrum(slow_time_extract(frames, 4, cfg.dsp.subsample), Window::hann);
    for (auto _ : state) {
        benchmark::DoNotOptimize(impulse_spacing(spec));
        benchmark::DoNotOptimize(doppler_support(spec).width);
    }
}
BENCHMARK(BM_SupportAndSpacing);

}  // namespace

BENCHMARK_MAIN();
