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

#include "ddlink/channel.hpp"

#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "ddlink/ddgrid.hpp"

namespace ddlink::channel {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(int value, int period) noexcept
{
    const int r = value % period;
    return r < 0 ? r + period : r;
}

cplx complex_gaussian(Rng &rng, double variance)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

// First tap at zero delay. The rest are distinct taps from [1, max_tap] when
// there are enough of them, otherwise uniform on [0, max_tap] with replacement.
std::vector<int> draw_delay_taps(int count, int max_tap, Rng &rng)
{
    std::vector<int> taps;
    taps.reserve(static_cast<std::size_t>(count));
    if (count == 0)
        return taps;
    taps.push_back(0);

    const int draws = count - 1;
    if (max_tap >= draws)
    {
        std::vector<int> pool(static_cast<std::size_t>(max_tap));
        std::iota(pool.begin(), pool.end(), 1);
        for (int i = 0; i < draws; ++i)
        {
            std::uniform_int_distribution<int> pick(i, max_tap - 1);
            std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(pick(rng))]);
            taps.push_back(pool[static_cast<std::size_t>(i)]);
        }
    }
    else
    {
        std::uniform_int_distribution<int> pick(0, max_tap);
        for (int i = 0; i < draws; ++i)
            taps.push_back(pick(rng));
    }
    return taps;
}

void check_grid(int N, int M)
{
    if (N < 1 || M < 1)
        throw std::invalid_argument("grid dimensions must be positive");
}

void check_antenna(int antenna, int antennas)
{
    if (antenna < 0 || antenna >= antennas)
        throw std::out_of_range("antenna index " + std::to_string(antenna) + " out of range");
}

// Dense operator y[k,l] += coeff * x[(k - doppler_shift) mod N, (l - delay_shift) mod M].
void add_shift(Eigen::MatrixXcd &H, cplx coeff, int doppler_shift, int delay_shift, int N, int M)
{
    for (int l = 0; l < M; ++l)
        for (int k = 0; k < N; ++k)
        {
            const int src = ddgrid::vector_index(wrap(k - doppler_shift, N), wrap(l - delay_shift, M), N);
            H(ddgrid::vector_index(k, l, N), src) += coeff;
        }
}

} // namespace

HMChannelRealization HMChannelRealization::without_fractional_doppler() const
{
    HMChannelRealization ideal = *this;
    for (auto &path : ideal.paths)
        path.frac_doppler = 0.0;
    return ideal;
}

cplx subpath_ratio(int q, double kappa, int N)
{
    if (N < 1)
        throw std::invalid_argument("subpath_ratio needs N >= 1");
    const double x = -static_cast<double>(q) - kappa;
    const double periods = x / N;
    if (std::abs(periods - std::round(periods)) < 1e-12)
        return {1.0, 0.0};
    const cplx num = std::polar(1.0, -kTwoPi * x) - 1.0;
    const cplx den = static_cast<double>(N) * (std::polar(1.0, -kTwoPi * x / N) - 1.0);
    return num / den;
}

cplx subpath_coefficient(cplx alpha, double nu_hz, double tau_s, int q, double kappa, int N)
{
    return alpha * std::polar(1.0, -kTwoPi * nu_hz * tau_s) * subpath_ratio(q, kappa, N);
}

HMChannelRealization sample_hm_channel(const SystemConfig &cfg, Rng &rng)
{
    cfg.validate();
    const int paths = cfg.hm_paths;
    const int k_max = cfg.max_doppler_tap();

    HMChannelRealization ch;
    ch.subpath_halfwidth = cfg.subpath_halfwidth;
    ch.subcarrier_spacing_hz = cfg.subcarrier_spacing_hz;
    ch.paths.resize(static_cast<std::size_t>(paths));

    std::uniform_int_distribution<int> doppler(-k_max, k_max);
    for (auto &path : ch.paths)
        path.doppler_tap = doppler(rng);

    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (auto &path : ch.paths)
        path.frac_doppler = 0.5 - unit(rng); // (-1/2, 1/2]

    const auto delays = draw_delay_taps(paths, cfg.max_delay_tap, rng);
    for (int p = 0; p < paths; ++p)
        ch.paths[static_cast<std::size_t>(p)].delay_tap = delays[static_cast<std::size_t>(p)];

    const double variance = 1.0 / paths;
    for (auto &path : ch.paths)
    {
        path.gains.resize(static_cast<std::size_t>(cfg.antennas));
        for (auto &g : path.gains)
            g = complex_gaussian(rng, variance);
    }
    return ch;
}

LMChannelRealization sample_lm_channel(const SystemConfig &cfg, int user, Rng &rng)
{
    cfg.validate();
    if (user < 1 || user > cfg.lm_users)
        throw std::invalid_argument("LM user index " + std::to_string(user) + " outside [1, U]");

    LMChannelRealization ch;
    ch.user = user;
    std::uniform_int_distribution<int> count(1, cfg.lm_max_paths);
    const int paths = count(rng);
    ch.paths.resize(static_cast<std::size_t>(paths));

    const auto delays = draw_delay_taps(paths, cfg.max_delay_tap, rng);
    const double variance = 1.0 / paths;
    for (int p = 0; p < paths; ++p)
    {
        auto &path = ch.paths[static_cast<std::size_t>(p)];
        path.delay_tap = delays[static_cast<std::size_t>(p)];
        path.gains.resize(static_cast<std::size_t>(cfg.antennas));
        for (auto &g : path.gains)
            g = complex_gaussian(rng, variance);
    }
    return ch;
}

cplx hm_subpath_gain(const HMChannelRealization &ch, int path, int antenna, int q, int N, int M)
{
    const auto &p = ch.paths.at(static_cast<std::size_t>(path));
    const double df = ch.subcarrier_spacing_hz;
    const double nu = (p.doppler_tap + p.frac_doppler) * df / N; // (k + kappa) / (N T)
    const double tau = p.delay_tap / (M * df);                    // l / (M delta_f)
    return subpath_coefficient(p.gains.at(static_cast<std::size_t>(antenna)), nu, tau, q,
                               p.frac_doppler, N);
}

HMMatrices build_hm_matrices(const HMChannelRealization &ch, int antenna, int N, int M)
{
    check_grid(N, M);
    check_antenna(antenna, ch.antennas());
    const Eigen::Index n = static_cast<Eigen::Index>(N) * M;
    HMMatrices out{Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd::Zero(n, n), Eigen::MatrixXcd()};

    for (int p = 0; p < static_cast<int>(ch.paths.size()); ++p)
    {
        const auto &path = ch.paths[static_cast<std::size_t>(p)];
        for (int q = -ch.subpath_halfwidth; q <= ch.subpath_halfwidth; ++q)
        {
            const cplx h = hm_subpath_gain(ch, p, antenna, q, N, M);
            auto &target = q == 0 ? out.desired : out.interference;
            add_shift(target, h, path.doppler_tap - q, path.delay_tap, N, M);
        }
    }
    out.full = out.desired + out.interference;
    return out;
}

EigenSpectra hm_eigen_spectra(const HMChannelRealization &ch, int N, int M)
{
    check_grid(N, M);
    const int A = ch.antennas();
    const Eigen::Index n = static_cast<Eigen::Index>(N) * M;
    EigenSpectra out{Eigen::MatrixXcd::Zero(A, n), Eigen::MatrixXcd::Zero(A, n),
                     Eigen::MatrixXcd::Zero(A, n)};

    Eigen::VectorXcd desired(N), idi(N), full(N), delay(M);
    for (int p = 0; p < static_cast<int>(ch.paths.size()); ++p)
    {
        const auto &path = ch.paths[static_cast<std::size_t>(p)];
        const int Np = ch.subpath_halfwidth;

        // Antenna-independent part of h_{p,a}(q) = alpha_{p,a} * c_p(q).
        std::vector<cplx> c(static_cast<std::size_t>(2 * Np + 1));
        const double df = ch.subcarrier_spacing_hz;
        const double nu = (path.doppler_tap + path.frac_doppler) * df / N;
        const double tau = path.delay_tap / (M * df);
        for (int q = -Np; q <= Np; ++q)
            c[static_cast<std::size_t>(q + Np)] = subpath_coefficient(1.0, nu, tau, q, path.frac_doppler, N);

        // Doppler-frequency response of each subpath group.
        for (int f = 0; f < N; ++f)
        {
            desired(f) = c[static_cast<std::size_t>(Np)] *
                         ddgrid::shift_eigenvalue(path.doppler_tap, 0, f, 0, N, M);
            cplx leak = 0.0;
            cplx all = 0.0;
            for (int q = -Np; q <= Np; ++q)
            {
                const cplx term = c[static_cast<std::size_t>(q + Np)] *
                                  ddgrid::shift_eigenvalue(path.doppler_tap - q, 0, f, 0, N, M);
                all += term;
                if (q != 0)
                    leak += term;
            }
            idi(f) = leak;
            full(f) = all;
        }
        for (int mu = 0; mu < M; ++mu)
            delay(mu) = ddgrid::shift_eigenvalue(0, path.delay_tap, 0, mu, N, M);

        for (int a = 0; a < A; ++a)
        {
            const cplx alpha = path.gains[static_cast<std::size_t>(a)];
            for (int mu = 0; mu < M; ++mu)
            {
                const cplx scale = alpha * delay(mu);
                for (int f = 0; f < N; ++f)
                {
                    const Eigen::Index i = ddgrid::vector_index(f, mu, N);
                    out.lambda_M(a, i) += scale * desired(f);
                    out.lambda_I(a, i) += scale * idi(f);
                    out.lambda_full(a, i) += scale * full(f);
                }
            }
        }
    }
    return out;
}

Eigen::MatrixXcd build_lm_matrix(const LMChannelRealization &ch, int antenna, int N, int M)
{
    check_grid(N, M);
    check_antenna(antenna, ch.antennas());
    const Eigen::Index n = static_cast<Eigen::Index>(N) * M;
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(n, n);
    for (const auto &path : ch.paths)
        add_shift(H, path.gains[static_cast<std::size_t>(antenna)], 0, path.delay_tap, N, M);
    return H;
}

Eigen::MatrixXcd lm_eigen_spectra(const LMChannelRealization &ch, int N, int M)
{
    check_grid(N, M);
    const int A = ch.antennas();
    const Eigen::Index n = static_cast<Eigen::Index>(N) * M;
    Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(A, n);
    for (const auto &path : ch.paths)
        for (int mu = 0; mu < M; ++mu)
        {
            const cplx e = ddgrid::shift_eigenvalue(0, path.delay_tap, 0, mu, N, M);
            for (int a = 0; a < A; ++a)
            {
                const cplx v = path.gains[static_cast<std::size_t>(a)] * e;
                for (int f = 0; f < N; ++f)
                    out(a, ddgrid::vector_index(f, mu, N)) += v;
            }
        }
    return out;
}

cplx lm_subchannel_gain(const LMChannelRealization &ch, int antenna, int m, int M)
{
    if (M < 1 || m < 0 || m >= M)
        throw std::out_of_range("subcarrier index outside [0, M)");
    check_antenna(antenna, ch.antennas());
    cplx h = 0.0;
    for (const auto &path : ch.paths)
    {
        const int r = static_cast<int>((static_cast<long long>(path.delay_tap) * m) % M);
        h += path.gains[static_cast<std::size_t>(antenna)] * std::polar(1.0, kTwoPi * r / M);
    }
    return h;
}

cplx lm_effective_gain(const LMChannelRealization &ch, const Eigen::VectorXcd &weights, int m, int M)
{
    if (weights.size() != ch.antennas())
        throw std::invalid_argument("beamforming weight count does not match antennas");
    cplx h = 0.0;
    for (int a = 0; a < ch.antennas(); ++a)
        h += weights(a) * lm_subchannel_gain(ch, a, m, M);
    return h;
}

} // namespace ddlink::channel
