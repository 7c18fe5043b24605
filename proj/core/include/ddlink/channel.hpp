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

#pragma once

#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ddlink/config.hpp"

namespace ddlink::channel {

using cplx = std::complex<double>;

/// Random stream consumed by the samplers.
using Rng = std::mt19937_64;

/// One resolvable path of the high-mobility channel. Taps are shared by all antennas.
struct HMPath
{
    int doppler_tap = 0;         ///< k_p in [-k_max, k_max]
    int delay_tap = 0;           ///< l_p in [0, l_max]
    double frac_doppler = 0.0;   ///< kappa_p in (-1/2, 1/2]
    std::vector<cplx> gains;     ///< alpha_{p,a}, one per antenna
};

struct HMChannelRealization
{
    std::vector<HMPath> paths;
    int subpath_halfwidth = 0; ///< N_p
    double subcarrier_spacing_hz = 15e3;

    int antennas() const noexcept
    {
        return paths.empty() ? 0 : static_cast<int>(paths.front().gains.size());
    }

    /// Same draw with every fractional Doppler set to zero.
    HMChannelRealization without_fractional_doppler() const;
};

struct LMPath
{
    int delay_tap = 0;
    std::vector<cplx> gains;
};

struct LMChannelRealization
{
    int user = 1; ///< u in [1, U]; served on subcarrier u - 1
    std::vector<LMPath> paths;

    int antennas() const noexcept
    {
        return paths.empty() ? 0 : static_cast<int>(paths.front().gains.size());
    }
};

/// Per-antenna eigenvalues on the NM-point spectral grid (rows: antennas,
/// columns: spectral index nu + N*mu).
struct EigenSpectra
{
    Eigen::MatrixXcd lambda_M;    ///< desired (q = 0) component
    Eigen::MatrixXcd lambda_I;    ///< inter-Doppler interference (q != 0)
    Eigen::MatrixXcd lambda_full; ///< all subpaths, summed independently of the split
};

struct HMMatrices
{
    Eigen::MatrixXcd desired;
    Eigen::MatrixXcd interference;
    Eigen::MatrixXcd full;
};

/// Leakage ratio of a fractional-Doppler path into the Doppler bin offset by q:
/// (e^{-j2pi(-q-kappa)} - 1) / (N e^{-j(2pi/N)(-q-kappa)} - N).
/// Returns the analytic limit 1 when -q-kappa is a multiple of N.
cplx subpath_ratio(int q, double kappa, int N);

/// alpha * exp(-j 2 pi nu tau) * subpath_ratio(q, kappa, N)
cplx subpath_coefficient(cplx alpha, double nu_hz, double tau_s, int q, double kappa, int N);

HMChannelRealization sample_hm_channel(const SystemConfig &cfg, Rng &rng);

/// Throws std::invalid_argument unless 1 <= user <= U.
LMChannelRealization sample_lm_channel(const SystemConfig &cfg, int user, Rng &rng);

/// Subpath coefficient h_{p,a}(q) of a realization, with nu and tau taken from the taps.
cplx hm_subpath_gain(const HMChannelRealization &ch, int path, int antenna, int q, int N, int M);

/// Dense NM x NM desired, IDI and full channel matrices for one antenna, acting
/// on column-stacked DD vectors.
HMMatrices build_hm_matrices(const HMChannelRealization &ch, int antenna, int N, int M);

/// Spectra evaluated directly from the cyclic-shift components of every path.
EigenSpectra hm_eigen_spectra(const HMChannelRealization &ch, int N, int M);

/// Dense NM x NM DD-domain matrix of an LM channel (delay shifts only).
Eigen::MatrixXcd build_lm_matrix(const LMChannelRealization &ch, int antenna, int N, int M);

/// A x NM spectra of the LM channel's DD-domain matrices. Delay-only channels
/// are flat across Doppler frequency; at delay frequency mu the value equals
/// lm_subchannel_gain at subcarrier (-mu mod M).
Eigen::MatrixXcd lm_eigen_spectra(const LMChannelRealization &ch, int N, int M);

/// H_{a,u}[m] = sum_p alpha_{p,a} exp(j 2 pi l_p m / M)
cplx lm_subchannel_gain(const LMChannelRealization &ch, int antenna, int m, int M);

/// sum_a v_a H_{a,u}[m]
cplx lm_effective_gain(const LMChannelRealization &ch, const Eigen::VectorXcd &weights, int m, int M);

} // namespace ddlink::channel
