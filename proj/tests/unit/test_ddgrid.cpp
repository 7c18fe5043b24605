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

#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "ddlink/ddgrid.hpp"
#include "ddlink/errors.hpp"

using namespace ddlink;
using namespace ddlink::ddgrid;
using ddlink::testing::cplx;

namespace {

Eigen::MatrixXcd random_grid(std::mt19937_64 &rng, int N, int M)
{
    std::normal_distribution<double> g;
    Eigen::MatrixXcd out(N, M);
    for (int k = 0; k < N; ++k)
        for (int l = 0; l < M; ++l)
            out(k, l) = cplx(g(rng), g(rng));
    return out;
}

} // namespace

TEST_CASE("isfft of a unit impulse at the origin is flat")
{
    DDGrid dd{Eigen::MatrixXcd::Zero(4, 4)};
    dd.data(0, 0) = 1.0;
    const TFGrid tf = isfft(dd);
    for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m)
            CHECK(std::abs(tf.data(n, m) - cplx(1.0 / 16.0)) < 1e-15);
}

TEST_CASE("isfft of a shifted impulse carries the expected phase ramp")
{
    DDGrid dd{Eigen::MatrixXcd::Zero(4, 4)};
    dd.data(1, 0) = 1.0;
    const TFGrid tf = isfft(dd);
    for (int n = 0; n < 4; ++n)
        for (int m = 0; m < 4; ++m)
        {
            const cplx expected = std::exp(cplx(0, 2 * std::numbers::pi * n / 4.0)) / 16.0;
            CHECK(std::abs(tf.data(n, m) - expected) < 1e-15);
        }
}

TEST_CASE("isfft matches the direct summation and sfft inverts it")
{
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dim(1, 9);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const int N = dim(rng);
        const int M = dim(rng);
        const DDGrid dd{random_grid(rng, N, M)};
        const TFGrid tf = isfft(dd);
        if (trial < 100)
            REQUIRE((tf.data - testing::direct_isfft(dd.data)).cwiseAbs().maxCoeff() < 1e-12);
        const DDGrid back = sfft(tf);
        REQUIRE((back.data - dd.data).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, dd.data.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("vectorization stacks columns with the Doppler index fastest")
{
    DDGrid dd{Eigen::MatrixXcd::Zero(16, 16)};
    dd.data(1, 2) = 7.0;
    const DDVector v = vectorize(dd);
    CHECK(v.data.size() == 256);
    CHECK(vector_index(1, 2, 16) == 33);
    CHECK(v.data(33) == cplx(7.0));
    CHECK(v.data.cwiseAbs().sum() == doctest::Approx(7.0));

    Eigen::MatrixXcd counting(3, 2);
    for (int l = 0; l < 2; ++l)
        for (int k = 0; k < 3; ++k)
            counting(k, l) = double(k + 3 * l);
    const DDVector c = vectorize(DDGrid{counting});
    for (int i = 0; i < 6; ++i)
        CHECK(c.data(i).real() == doctest::Approx(i));

    const DDGrid round = devectorize(c);
    CHECK(round.data == counting);
}

TEST_CASE("devectorize rejects a length that does not match N*M")
{
    DDVector v{Eigen::VectorXcd::Zero(10), 3, 4};
    CHECK_THROWS_AS(devectorize(v), std::invalid_argument);
}

TEST_CASE("basis of a 1x1 grid is the scalar one")
{
    const SpectralBasis b = build_basis(1, 1);
    REQUIRE(b.psi.rows() == 1);
    CHECK(std::abs(b.psi(0, 0) - cplx(1.0)) < 1e-15);
}

TEST_CASE("basis is unitary")
{
    for (auto [N, M] : {std::pair{4, 4}, std::pair{4, 3}, std::pair{8, 5}, std::pair{16, 16}})
    {
        const SpectralBasis b = build_basis(N, M);
        const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(N * M, N * M);
        CHECK((b.psi * b.psi.adjoint() - I).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("a one-bin Doppler shift diagonalizes to the roots of unity")
{
    const int N = 4;
    const int M = 3;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N * M, N * M);
    for (int l = 0; l < M; ++l)
        for (int k = 0; k < N; ++k)
            H(vector_index(k, l, N), vector_index((k + N - 1) % N, l, N)) = 1.0;
    const Eigen::VectorXcd lambda = diagonalize_bccb(H, build_basis(N, M));
    for (int mu = 0; mu < M; ++mu)
        for (int nu = 0; nu < N; ++nu)
        {
            const cplx expected = std::exp(cplx(0, -2 * std::numbers::pi * nu / N));
            CHECK(std::abs(lambda(vector_index(nu, mu, N)) - expected) < 1e-12);
            CHECK(std::abs(shift_eigenvalue(1, 0, nu, mu, N, M) - expected) < 1e-12);
        }
}

TEST_CASE("the swapped Kronecker order does not diagonalize a rectangular grid")
{
    const int N = 4;
    const int M = 3;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N * M, N * M);
    for (int l = 0; l < M; ++l)
        for (int k = 0; k < N; ++k)
            H(vector_index(k, l, N), vector_index((k + N - 1) % N, (l + M - 1) % M, N)) = 1.0;
    auto dft = [](int n) {
        Eigen::MatrixXcd F(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                F(a, b) = std::exp(cplx(0, -2 * std::numbers::pi * a * b / n)) / std::sqrt(double(n));
        return F;
    };
    const Eigen::MatrixXcd FN = dft(N);
    const Eigen::MatrixXcd FM = dft(M);
    Eigen::MatrixXcd swapped(N * M, N * M);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            swapped.block(i * M, j * M, M, M) = FN(i, j) * FM;
    Eigen::MatrixXcd D = swapped * H * swapped.adjoint();
    D.diagonal().setZero();
    CHECK(D.cwiseAbs().maxCoeff() > 0.1);
    CHECK_NOTHROW(diagonalize_bccb(H, build_basis(N, M)));
}

TEST_CASE("diagonalize_bccb on trivial and non-circulant input")
{
    const SpectralBasis b = build_basis(4, 4);
    const Eigen::VectorXcd ones = diagonalize_bccb(Eigen::MatrixXcd::Identity(16, 16), b);
    CHECK((ones.array() - cplx(1.0)).abs().maxCoeff() < 1e-12);
    const Eigen::VectorXcd zeros = diagonalize_bccb(Eigen::MatrixXcd::Zero(16, 16), b);
    CHECK(zeros.cwiseAbs().maxCoeff() == 0.0);

    std::mt19937_64 rng(3);
    CHECK_THROWS_AS(diagonalize_bccb(random_grid(rng, 16, 16), b), NotBlockCirculant);
}

TEST_CASE("shift eigenvalue agrees with the dense diagonalization for every shift")
{
    const int N = 5;
    const int M = 4;
    const SpectralBasis b = build_basis(N, M);
    for (int sk = -N; sk <= N; ++sk)
        for (int sl = 0; sl < M; ++sl)
        {
            Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(N * M, N * M);
            for (int l = 0; l < M; ++l)
                for (int k = 0; k < N; ++k)
                    H(vector_index(k, l, N),
                      vector_index(testing::wrap(k - sk, N), testing::wrap(l - sl, M), N)) = 1.0;
            const Eigen::VectorXcd lambda = diagonalize_bccb(H, b);
            for (int mu = 0; mu < M; ++mu)
                for (int nu = 0; nu < N; ++nu)
                    REQUIRE(std::abs(lambda(vector_index(nu, mu, N)) - shift_eigenvalue(sk, sl, nu, mu, N, M)) <
                            1e-12);
        }
}
