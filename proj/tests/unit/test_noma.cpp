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

#include <numeric>
#include <random>

#include "doctest.h"

#include "ddlink/ddgrid.hpp"
#include "ddlink/errors.hpp"
#include "ddlink/noma.hpp"

using namespace ddlink;
using namespace ddlink::noma;
using cplx = std::complex<double>;

TEST_CASE("inverse-gain power allocation")
{
    const std::vector<cplx> gains = {cplx(1.0), cplx(0.0, 2.0)};
    const auto alloc = allocate_power(0.5, gains);
    REQUIRE(alloc.lm_users() == 2);
    CHECK(alloc.hm() == 0.5);
    CHECK(alloc.lm(1) == doctest::Approx(1.0 / 3.0));
    CHECK(alloc.lm(2) == doctest::Approx(1.0 / 6.0));

    const std::vector<cplx> equal(4, cplx(0.3, 0.4));
    const auto even = allocate_power(0.8, equal);
    for (int u = 1; u <= 4; ++u)
        CHECK(even.lm(u) == doctest::Approx(0.05));

    CHECK(allocate_power(1.0, gains).lm(1) == 0.0);
}

TEST_CASE("power allocation properties")
{
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> p(0.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial)
    {
        std::vector<cplx> gains(8);
        for (auto &h : gains)
            h = cplx(g(rng), g(rng));
        const double p0 = p(rng);
        const auto alloc = allocate_power(p0, gains);
        REQUIRE(std::accumulate(alloc.p.begin(), alloc.p.end(), 0.0) == doctest::Approx(1.0));

        // Scaling every gain leaves the split unchanged.
        std::vector<cplx> scaled = gains;
        for (auto &h : scaled)
            h *= 3.7;
        const auto again = allocate_power(p0, scaled);
        for (std::size_t i = 0; i < alloc.p.size(); ++i)
            REQUIRE(again.p[i] == doctest::Approx(alloc.p[i]));

        // Weaker users receive more power.
        for (int a = 1; a <= 8; ++a)
            for (int b = 1; b <= 8; ++b)
                if (std::abs(gains[a - 1]) < std::abs(gains[b - 1]))
                    REQUIRE(alloc.lm(a) >= alloc.lm(b));
    }
}

TEST_CASE("power allocation errors")
{
    const std::vector<cplx> dead = {cplx(1.0), cplx(0.0)};
    CHECK_THROWS_AS(allocate_power(0.5, dead), ZeroGain);
    const std::vector<cplx> fine = {cplx(1.0)};
    CHECK_THROWS_AS(allocate_power(-0.1, fine), std::invalid_argument);
    CHECK_THROWS_AS(allocate_power(1.1, fine), std::invalid_argument);
}

TEST_CASE("superposition")
{
    PowerAllocation alloc{{0.25, 0.75}};
    ddgrid::DDVector a{Eigen::VectorXcd::Constant(4, cplx(2.0)), 2, 2};
    ddgrid::DDVector b{Eigen::VectorXcd::Constant(4, cplx(0.0, 1.0)), 2, 2};
    const std::vector<ddgrid::DDVector> both = {a, b};
    const auto s = superpose(both, alloc);
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(s.data(i) - cplx(1.0, std::sqrt(0.75))) < 1e-15);

    const std::vector<ddgrid::DDVector> one = {a};
    CHECK_THROWS_AS(superpose(one, alloc), std::invalid_argument);
    ddgrid::DDVector odd{Eigen::VectorXcd::Zero(6), 2, 3};
    const std::vector<ddgrid::DDVector> mismatched = {a, odd};
    CHECK_THROWS_AS(superpose(mismatched, alloc), std::invalid_argument);
}

TEST_CASE("superposed unit-power streams carry unit power")
{
    std::mt19937_64 rng(31);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5));
    std::vector<cplx> gains(8);
    for (auto &h : gains)
        h = cplx(g(rng), g(rng));
    const auto alloc = allocate_power(0.5, gains);
    double power = 0.0;
    long count = 0;
    for (int frame = 0; frame < 400; ++frame)
    {
        std::vector<ddgrid::DDVector> streams;
        for (int u = 0; u <= 8; ++u)
        {
            ddgrid::DDVector v{Eigen::VectorXcd(256), 16, 16};
            for (int i = 0; i < 256; ++i)
                v.data(i) = cplx(g(rng), g(rng));
            streams.push_back(std::move(v));
        }
        power += superpose(streams, alloc).data.squaredNorm();
        count += 256;
    }
    CHECK(power / count == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("LM embedding occupies a single subcarrier")
{
    const int N = 8, M = 6;
    std::vector<cplx> symbols(N);
    for (int n = 0; n < N; ++n)
        symbols[n] = cplx(n % 2 ? 1.0 : -1.0, n % 3 ? 1.0 : -1.0) / std::sqrt(2.0);
    for (int user = 1; user <= M; ++user)
    {
        const auto dd = embed_lm_signal(user, symbols, N, M);
        const auto tf = ddgrid::isfft(ddgrid::devectorize(dd));
        for (int n = 0; n < N; ++n)
            for (int m = 0; m < M; ++m)
            {
                const cplx expected = m == user - 1 ? symbols[n] : cplx(0.0);
                REQUIRE(std::abs(tf.data(n, m) - expected) < 1e-12);
            }
    }
    CHECK_THROWS_AS(embed_lm_signal(0, symbols, N, M), std::invalid_argument);
    CHECK_THROWS_AS(embed_lm_signal(M + 1, symbols, N, M), std::invalid_argument);
    CHECK_THROWS_AS(embed_lm_signal(1, std::span(symbols).first(3), N, M), std::invalid_argument);
}

TEST_CASE("spectral efficiency")
{
    CHECK(spectral_efficiency(0.0) == 0.0);
    CHECK(spectral_efficiency(1.0) == doctest::Approx(1.0));
    CHECK(spectral_efficiency(3.0) == doctest::Approx(2.0));
    CHECK_THROWS_AS(spectral_efficiency(-1e-3), std::invalid_argument);
    double prev = 0.0, prev_step = 1e9;
    for (int i = 1; i <= 200; ++i)
    {
        const double se = spectral_efficiency(0.1 * i);
        CHECK(se > prev);
        CHECK(se - prev <= prev_step + 1e-15);
        prev_step = se - prev;
        prev = se;
    }
}

TEST_CASE("rate assembly")
{
    equalizer::LinkSNRs snrs;
    snrs.gamma_0 = 3.0;
    snrs.gamma_0u = {1.0, 15.0};
    snrs.gamma_u = {7.0, 3.0};
    const auto worst = assemble_rates(snrs, LmMinConvention::WorstStage);
    CHECK(worst.se_hm == doctest::Approx(2.0));
    CHECK(worst.se_hm_at_lm[0] == doctest::Approx(1.0));
    CHECK(worst.se_hm_at_lm[1] == doctest::Approx(4.0));
    CHECK(worst.se_lm[0] == doctest::Approx(3.0));
    CHECK(worst.se_lm[1] == doctest::Approx(2.0));
    CHECK(worst.se_lm_min == doctest::Approx(1.0));
    const auto lm_only = assemble_rates(snrs, LmMinConvention::LmDetectionOnly);
    CHECK(lm_only.se_lm_min == doctest::Approx(2.0));

    snrs.gamma_u.pop_back();
    CHECK_THROWS_AS(assemble_rates(snrs), std::invalid_argument);
}
