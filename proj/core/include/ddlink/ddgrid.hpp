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

#include <Eigen/Dense>

namespace ddlink::ddgrid {

using cplx = std::complex<double>;

/// Delay-Doppler grid. Rows are Doppler bins k in [0, N), columns are delay bins l in [0, M).
struct DDGrid
{
    Eigen::MatrixXcd data;

    int N() const noexcept { return static_cast<int>(data.rows()); }
    int M() const noexcept { return static_cast<int>(data.cols()); }
};

/// Time-frequency grid. Rows are time slots n in [0, N), columns are subcarriers m in [0, M).
struct TFGrid
{
    Eigen::MatrixXcd data;

    int N() const noexcept { return static_cast<int>(data.rows()); }
    int M() const noexcept { return static_cast<int>(data.cols()); }
};

/// Column-stacked delay-Doppler vector: element k + N*l holds grid entry (k, l).
struct DDVector
{
    Eigen::VectorXcd data;
    int N = 0;
    int M = 0;
};

/// Unitary spectral basis diagonalizing every 2-D cyclic-shift operator on
/// column-stacked DD vectors.
///
/// The stacking index k + N*l makes the delay index the block index, so the
/// basis is kron(F_M, F_N): the outer factor transforms across the M blocks and
/// the inner factor across the N entries of each block. Spectral index
/// i = nu + N*mu pairs Doppler frequency nu with delay frequency mu. Both
/// factors are unitary DFTs with kernel exp(-j 2 pi xy / n) / sqrt(n).
struct SpectralBasis
{
    int N = 0;
    int M = 0;
    Eigen::MatrixXcd psi;
};

/// Inverse symplectic transform with 1/(NM) scaling:
/// out[n,m] = 1/(NM) sum_{k,l} dd[k,l] exp(j2pi(kn/N - ml/M)).
TFGrid isfft(const DDGrid &dd);

/// Exact inverse of isfft (carries the NM rescaling).
DDGrid sfft(const TFGrid &tf);

DDVector vectorize(const DDGrid &grid);

/// Throws std::invalid_argument when the data length is not N*M.
DDGrid devectorize(const DDVector &vec);

/// Position of grid entry (k, l) inside a column-stacked vector.
constexpr int vector_index(int k, int l, int N) noexcept { return k + N * l; }

/// Throws std::invalid_argument for N < 1 or M < 1.
SpectralBasis build_basis(int N, int M);

/// Relative tolerance for the off-diagonal residual in diagonalize_bccb.
inline constexpr double kDiagonalTolerance = 1e-9;

/// diag(psi * H * psi^H). Throws NotBlockCirculant when the off-diagonal
/// residual exceeds kDiagonalTolerance times the largest diagonal magnitude.
Eigen::VectorXcd diagonalize_bccb(const Eigen::MatrixXcd &H, const SpectralBasis &basis);

/// Eigenvalue of the cyclic shift (k, l) -> (k + doppler_shift, l + delay_shift)
/// at spectral index (nu, mu).
cplx shift_eigenvalue(int doppler_shift, int delay_shift, int nu, int mu, int N, int M) noexcept;

} // namespace ddlink::ddgrid
