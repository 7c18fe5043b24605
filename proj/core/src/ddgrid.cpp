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

#include "ddlink/ddgrid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ddlink/errors.hpp"

namespace ddlink::ddgrid {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

int wrap(long long value, int period) noexcept
{
    const long long r = value % period;
    return static_cast<int>(r < 0 ? r + period : r);
}

// exp(sign * j 2 pi (x y mod n) / n); reducing the product first keeps the
// phase argument small.
cplx twiddle(int x, int y, int n, int sign) noexcept
{
    const int r = wrap(static_cast<long long>(x) * y, n);
    return std::polar(1.0, sign * kTwoPi * r / n);
}

Eigen::MatrixXcd dft_kernel(int n, int sign, double scale)
{
    Eigen::MatrixXcd W(n, n);
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            W(x, y) = scale * twiddle(x, y, n, sign);
    return W;
}

void check_shape(const Eigen::MatrixXcd &data)
{
    if (data.rows() < 1 || data.cols() < 1)
        throw std::invalid_argument("grid must have at least one row and one column");
}

} // namespace

TFGrid isfft(const DDGrid &dd)
{
    check_shape(dd.data);
    const int N = dd.N();
    const int M = dd.M();
    // out = 1/(NM) * A * dd * B with A[n,k] = e^{+j2pi nk/N}, B[l,m] = e^{-j2pi lm/M}
    const Eigen::MatrixXcd A = dft_kernel(N, +1, 1.0);
    const Eigen::MatrixXcd B = dft_kernel(M, -1, 1.0);
    TFGrid tf;
    tf.data = (A * dd.data * B) / static_cast<double>(N * M);
    return tf;
}

DDGrid sfft(const TFGrid &tf)
{
    check_shape(tf.data);
    const int N = tf.N();
    const int M = tf.M();
    const Eigen::MatrixXcd A = dft_kernel(N, -1, 1.0);
    const Eigen::MatrixXcd B = dft_kernel(M, +1, 1.0);
    DDGrid dd;
    dd.data = A * tf.data * B;
    return dd;
}

DDVector vectorize(const DDGrid &grid)
{
    const int N = grid.N();
    const int M = grid.M();
    DDVector vec;
    vec.N = N;
    vec.M = M;
    vec.data.resize(static_cast<Eigen::Index>(N) * M);
    for (int l = 0; l < M; ++l)
        for (int k = 0; k < N; ++k)
            vec.data(vector_index(k, l, N)) = grid.data(k, l);
    return vec;
}

DDGrid devectorize(const DDVector &vec)
{
    if (vec.N < 1 || vec.M < 1 || vec.data.size() != static_cast<Eigen::Index>(vec.N) * vec.M)
        throw std::invalid_argument("DD vector length " + std::to_string(vec.data.size()) +
                                    " does not match N*M = " + std::to_string(vec.N * vec.M));
    DDGrid grid;
    grid.data.resize(vec.N, vec.M);
    for (int l = 0; l < vec.M; ++l)
        for (int k = 0; k < vec.N; ++k)
            grid.data(k, l) = vec.data(vector_index(k, l, vec.N));
    return grid;
}

SpectralBasis build_basis(int N, int M)
{
    if (N < 1 || M < 1)
        throw std::invalid_argument("spectral basis needs N >= 1 and M >= 1");
    const Eigen::MatrixXcd FN = dft_kernel(N, -1, 1.0 / std::sqrt(static_cast<double>(N)));
    const Eigen::MatrixXcd FM = dft_kernel(M, -1, 1.0 / std::sqrt(static_cast<double>(M)));

    SpectralBasis basis;
    basis.N = N;
    basis.M = M;
    basis.psi.resize(static_cast<Eigen::Index>(N) * M, static_cast<Eigen::Index>(N) * M);
    // kron(FM, FN): row nu + N*mu, column k + N*l
    for (int mu = 0; mu < M; ++mu)
        for (int l = 0; l < M; ++l)
            basis.psi.block(static_cast<Eigen::Index>(mu) * N, static_cast<Eigen::Index>(l) * N, N, N) =
                FM(mu, l) * FN;
    return basis;
}

Eigen::VectorXcd diagonalize_bccb(const Eigen::MatrixXcd &H, const SpectralBasis &basis)
{
    const Eigen::Index n = basis.psi.rows();
    if (H.rows() != n || H.cols() != n)
        throw std::invalid_argument("channel matrix size does not match the spectral basis");

    const Eigen::MatrixXcd D = basis.psi * H * basis.psi.adjoint();
    Eigen::VectorXcd diag = D.diagonal();

    double scale = 0.0;
    for (Eigen::Index i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(diag(i)));
    double residual = 0.0;
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < n; ++r)
            if (r != c)
                residual = std::max(residual, std::abs(D(r, c)));

    if (residual > kDiagonalTolerance * scale && residual > 0.0)
        throw NotBlockCirculant(residual, scale);
    return diag;
}

cplx shift_eigenvalue(int doppler_shift, int delay_shift, int nu, int mu, int N, int M) noexcept
{
    // Reduce to a single fraction of the full turn: (a/N + b/M) = (a*M + b*N) / (NM)
    const int a = wrap(static_cast<long long>(doppler_shift) * nu, N);
    const int b = wrap(static_cast<long long>(delay_shift) * mu, M);
    const long long turns = static_cast<long long>(a) * M + static_cast<long long>(b) * N;
    const long long NM = static_cast<long long>(N) * M;
    return std::polar(1.0, -kTwoPi * static_cast<double>(turns % NM) / static_cast<double>(NM));
}

} // namespace ddlink::ddgrid
