// SPDX-License-Identifier: Apache-2.0
//
// ddlink-sim: delay-Doppler / NOMA downlink link-level simulator
// Copyright (C) 2026 The ddlink-sim Authors
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

#include "ddlink/channel.hpp"
#include "ddlink/ddgrid.hpp"
#include "ddlink/equalizer.hpp"
#include "ddlink/simkit.hpp"

using namespace ddlink;

static void BM_HmEigenSpectra(benchmark::State &state)
{
    SystemConfig cfg;
    cfg.doppler_bins = cfg.delay_bins = static_cast<int>(state.range(0));
    channel::Rng rng(1);
    const auto ch = channel::sample_hm_channel(cfg, rng);
    for (auto _ : state)
        benchmark::DoNotOptimize(channel::hm_eigen_spectra(ch, cfg.doppler_bins, cfg.delay_bins));
}
BENCHMARK(BM_HmEigenSpectra)->Arg(16)->Arg(32);

static void BM_DenseDiagonalize(benchmark::State &state)
{
    const int n = static_cast<int>(state.range(0));
    SystemConfig cfg;
    cfg.doppler_bins = cfg.delay_bins = n;
    channel::Rng rng(2);
    const auto ch = channel::sample_hm_channel(cfg, rng);
    const auto H = channel::build_hm_matrices(ch, 0, n, n).full;
    const auto basis = ddgrid::build_basis(n, n);
    for (auto _ : state)
        benchmark::DoNotOptimize(ddgrid::diagonalize_bccb(H, basis));
}
BENCHMARK(BM_DenseDiagonalize)->Arg(12)->Arg(16);

static void BM_Isfft(benchmark::State &state)
{
    const int n = static_cast<int>(state.range(0));
    ddgrid::DDGrid dd{Eigen::MatrixXcd::Random(n, n)};
    for (auto _ : state)
        benchmark::DoNotOptimize(ddgrid::isfft(dd));
}
BENCHMARK(BM_Isfft)->Arg(16)->Arg(64);

static void BM_RunTrial(benchmark::State &state)
{
    const SystemConfig cfg;
    std::uint64_t i = 0;
    for (auto _ : state)
    {
        benchmark::DoNotOptimize(simkit::run_trial(cfg, simkit::derive_trial_seed(cfg.master_seed, i), i));
        ++i;
    }
}
BENCHMARK(BM_RunTrial);

BENCHMARK_MAIN();
