// SPDX-License-Identifier: Apache-2.0
//
// blindcfo: blind multiuser carrier-frequency offset estimation
// Copyright (C) 2026 The blindcfo authors
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

#include <vector>

#include <benchmark/benchmark.h>

#include "blindcfo/baseline.hpp"
#include "blindcfo/bss.hpp"
#include "blindcfo/cfo.hpp"
#include "blindcfo/experiment.hpp"
#include "blindcfo/pll.hpp"
#include "blindcfo/rng.hpp"

using namespace blindcfo;

namespace
{

sigmodel::PolyphaseObservations scene(int P, int N, sigmodel::SymbolFrame *frame_out = nullptr)
{
    const auto ch = sigmodel::draw_random_channel(2, P, 1);
    const auto frame = sigmodel::generate_symbols(2, N, Constellation::qam4(), 2);
    if (frame_out)
        *frame_out = frame;
    return sigmodel::synthesize_observations(sigmodel::build_virtual_channel(ch), frame, ch, 20.0, 3);
}

void BM_EstimateMixing(benchmark::State &state)
{
    const auto obs = scene(static_cast<int>(state.range(0)), static_cast<int>(state.range(1)));
    for (auto _ : state)
        benchmark::DoNotOptimize(bss::estimate_mixing(obs, 2));
    state.SetItemsProcessed(state.iterations() * state.range(1));
}
BENCHMARK(BM_EstimateMixing)->Args({2, 1024})->Args({4, 1024})->Args({8, 1024})->Args({4, 8192});

void BM_FitCfo(benchmark::State &state)
{
    const auto P = static_cast<int>(state.range(0));
    const auto A = sigmodel::build_virtual_channel(sigmodel::draw_random_channel(2, P, 4)).mixing;
    for (auto _ : state)
        benchmark::DoNotOptimize(cfo::fit_cfo(cfo::phase_matrix(A), P));
}
BENCHMARK(BM_FitCfo)->Arg(2)->Arg(8)->Arg(32);

void BM_PllTrack(benchmark::State &state)
{
    const auto N = static_cast<int>(state.range(0));
    const auto f = sigmodel::generate_symbols(1, N, Constellation::qam4(), 5);
    Rng rng(6);
    std::vector<cx> x;
    for (int i = 0; i < N; ++i)
        x.push_back(f.symbols(0, i) * std::polar(1.0, two_pi * 0.01 * i) + complex_gaussian(rng, 0.01));
    const auto c = Constellation::qam4();
    for (auto _ : state)
        benchmark::DoNotOptimize(pll::pll_track(x, c, {}));
    state.SetItemsProcessed(state.iterations() * N);
}
BENCHMARK(BM_PllTrack)->Arg(1024)->Arg(8192);

void BM_PilotCfoEstimate(benchmark::State &state)
{
    const auto L = static_cast<int>(state.range(0));
    const auto pilots = baseline::generate_pilots(2, L, Constellation::qam4(), 7);
    const auto obs = scene(4, L);
    for (auto _ : state)
        benchmark::DoNotOptimize(baseline::pilot_cfo_estimate(obs.samples, pilots));
}
BENCHMARK(BM_PilotCfoEstimate)->Arg(32)->Arg(128);

void BM_Trial(benchmark::State &state)
{
    harness::TrialSpec spec;
    spec.channel = harness::two_user_example_channel(4);
    spec.length = 1024;
    spec.snr_db = 20.0;
    spec.method = state.range(0) == 0 ? harness::Method::blind : harness::Method::pilot;
    Seed s = 0;
    for (auto _ : state)
    {
        spec.data_seed = ++s;
        benchmark::DoNotOptimize(harness::run_trial(spec));
    }
}
BENCHMARK(BM_Trial)->Arg(0)->Arg(1);

} // namespace

BENCHMARK_MAIN();
