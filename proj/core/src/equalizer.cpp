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

#include "ddlink/equalizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ddlink/ddgrid.hpp"
#include "ddlink/errors.hpp"
#include "ddlink/noma.hpp"

namespace ddlink::equalizer {

namespace {

double mean_abs2(const Eigen::VectorXcd &v)
{
    return v.size() == 0 ? 0.0 : v.cwiseAbs2().sum() / static_cast<double>(v.size());
}

void check_snr_inputs(double p0, double rho_t)
{
    if (!(p0 >= 0.0 && p0 <= 1.0))
        throw std::invalid_argument("power factor p0 must lie in [0, 1]");
    if (!(rho_t > 0.0))
        throw std::invalid_argument("transmit SNR must be positive");
}

cplx complex_gaussian(channel::Rng &rng, double variance)
{
    std::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

} // namespace

Eigen::VectorXcd uniform_weights(int antennas)
{
    if (antennas < 1)
        throw std::invalid_argument("need at least one antenna");
    return Eigen::VectorXcd::Constant(antennas, cplx(1.0 / std::sqrt(static_cast<double>(antennas)), 0.0));
}

Eigen::VectorXcd combine(const Eigen::MatrixXcd &lambda, const Eigen::VectorXcd &weights)
{
    if (lambda.rows() != weights.size())
        throw std::invalid_argument("spectrum rows must match the number of beamforming weights");
    return (weights.transpose() * lambda).transpose();
}

EqualizerSpectrum mmse_spectrum(const Eigen::MatrixXcd &lambda, const Eigen::VectorXcd &weights, double rho)
{
    if (!(rho > 0.0))
        throw std::invalid_argument("MMSE regularizer must be positive");
    const Eigen::VectorXcd c = combine(lambda, weights);
    EqualizerSpectrum spec;
    spec.rho = rho;
    spec.weights = weights;
    spec.delta.resize(c.size());
    for (Eigen::Index i = 0; i < c.size(); ++i)
        spec.delta(i) = std::conj(c(i)) / (std::norm(c(i)) + rho);
    return spec;
}

OmegaTerms omega_terms_hm(const EqualizerSpectrum &spec, const Eigen::MatrixXcd &lambda_M,
                          const Eigen::MatrixXcd &lambda_I, const Eigen::VectorXcd &weights)
{
    const Eigen::VectorXcd cM = combine(lambda_M, weights);
    const Eigen::VectorXcd cI = combine(lambda_I, weights);
    if (cM.size() != spec.delta.size() || cI.size() != spec.delta.size())
        throw std::invalid_argument("spectrum length does not match the equalizer");

    OmegaTerms w;
    w.omega_E = mean_abs2(spec.delta.cwiseProduct(cM));
    w.omega_F = mean_abs2(spec.delta.cwiseProduct(cI));
    w.omega_0 = mean_abs2(spec.delta);
    return w;
}

OmegaTerms omega_terms_lm(const EqualizerSpectrum &spec_u, const Eigen::MatrixXcd &lambda_u,
                          const Eigen::VectorXcd &weights)
{
    const Eigen::VectorXcd c = combine(lambda_u, weights);
    if (c.size() != spec_u.delta.size())
        throw std::invalid_argument("spectrum length does not match the equalizer");
    OmegaTerms w;
    w.omega_T = mean_abs2(spec_u.delta.cwiseProduct(c));
    w.omega_U = mean_abs2(spec_u.delta);
    return w;
}

double hm_snr(const OmegaTerms &omega, double p0, double rho_t)
{
    check_snr_inputs(p0, rho_t);
    if (omega.omega_0 <= 0.0)
        throw DegenerateSpectrum("HM equalizer is identically zero (null channel)");
    const double signal = p0 * rho_t * omega.omega_E;
    return signal / ((1.0 - p0) * rho_t * omega.omega_E + rho_t * omega.omega_F + omega.omega_0);
}

double hm_at_lm_snr(const OmegaTerms &omega, double p0, double rho_t)
{
    check_snr_inputs(p0, rho_t);
    if (!omega.omega_T || !omega.omega_U)
        throw std::invalid_argument("LM omega terms are missing");
    if (*omega.omega_U <= 0.0)
        throw DegenerateSpectrum("LM equalizer is identically zero (null channel)");
    const double wT = *omega.omega_T;
    return p0 * rho_t * wT / ((1.0 - p0) * rho_t * wT + *omega.omega_U);
}

double hm_at_lm_snr(const EqualizerSpectrum &spec_u, const Eigen::MatrixXcd &lambda_u,
                    const Eigen::VectorXcd &weights, double p0, double rho_t)
{
    return hm_at_lm_snr(omega_terms_lm(spec_u, lambda_u, weights), p0, rho_t);
}

double lm_snr(double p_u, double rho_t, cplx effective_gain)
{
    if (!(p_u >= 0.0 && p_u <= 1.0))
        throw std::invalid_argument("LM power factor must lie in [0, 1]");
    return p_u * rho_t * std::norm(effective_gain);
}

double verify_decomposition(const EqualizerSpectrum &spec, const channel::EigenSpectra &spectra,
                            const Eigen::VectorXcd &weights)
{
    const Eigen::VectorXcd dT = spec.delta.cwiseProduct(combine(spectra.lambda_full, weights));
    const Eigen::VectorXcd dE = spec.delta.cwiseProduct(combine(spectra.lambda_M, weights));
    const Eigen::VectorXcd dF = spec.delta.cwiseProduct(combine(spectra.lambda_I, weights));
    const double residual = (dT - (dE + dF)).cwiseAbs().maxCoeff();
    const double scale = dT.cwiseAbs().maxCoeff();
    return scale > 0.0 ? residual / scale : residual;
}

OracleResult signal_level_oracle(const channel::HMChannelRealization &ch,
                                 const std::vector<channel::LMChannelRealization> &lm_set,
                                 const SystemConfig &cfg, double rho_t, long symbols,
                                 channel::Rng &rng, LmSignalModel model)
{
    cfg.validate();
    if (!(rho_t > 0.0))
        throw std::invalid_argument("transmit SNR must be positive");
    if (symbols < 1)
        throw std::invalid_argument("symbol count must be positive");
    if (static_cast<int>(lm_set.size()) != cfg.lm_users)
        throw std::invalid_argument("LM channel count does not match U");

    const int N = cfg.doppler_bins;
    const int M = cfg.delay_bins;
    const Eigen::Index n = static_cast<Eigen::Index>(N) * M;
    const Eigen::VectorXcd v = uniform_weights(ch.antennas());
    const double p0 = cfg.hm_power;

    // Closed form from the fast spectra.
    const auto spectra = channel::hm_eigen_spectra(ch, N, M);
    const auto spec = mmse_spectrum(spectra.lambda_M, v, cfg.mmse_regularizer);
    OracleResult result;
    result.gamma_analytic = hm_snr(omega_terms_hm(spec, spectra.lambda_M, spectra.lambda_I, v), p0, rho_t);

    // Dense beamformed channels and the MMSE detector in its matrix form
    // (H^H H + rho I)^{-1} H^H, independent of the spectral route.
    Eigen::MatrixXcd H_desired = Eigen::MatrixXcd::Zero(n, n);
    Eigen::MatrixXcd H_full = Eigen::MatrixXcd::Zero(n, n);
    for (int a = 0; a < ch.antennas(); ++a)
    {
        const auto mats = channel::build_hm_matrices(ch, a, N, M);
        H_desired += v(a) * mats.desired;
        H_full += v(a) * mats.full;
    }
    const Eigen::MatrixXcd gram =
        H_desired.adjoint() * H_desired + cfg.mmse_regularizer * Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd G = gram.ldlt().solve(H_desired.adjoint());
    const Eigen::MatrixXcd G_desired = G * H_desired;
    const Eigen::MatrixXcd G_full = G * H_full;

    std::vector<cplx> gains;
    gains.reserve(lm_set.size());
    for (const auto &lm : lm_set)
        gains.push_back(channel::lm_effective_gain(lm, v, lm.user - 1, M));
    const auto alloc = noma::allocate_power(p0, gains);

    const long frames = (symbols + n - 1) / n;
    std::vector<double> sig_power(static_cast<std::size_t>(frames));
    std::vector<double> rest_power(static_cast<std::size_t>(frames));
    const double noise_var = 1.0 / rho_t;

    std::vector<ddgrid::DDVector> streams(static_cast<std::size_t>(cfg.lm_users + 1));
    std::vector<cplx> lm_symbols(static_cast<std::size_t>(N));
    Eigen::VectorXcd noise(n);
    for (long f = 0; f < frames; ++f)
    {
        auto &hm = streams[0];
        hm.N = N;
        hm.M = M;
        hm.data.resize(n);
        for (Eigen::Index i = 0; i < n; ++i)
            hm.data(i) = complex_gaussian(rng, 1.0);
        for (int u = 1; u <= cfg.lm_users; ++u)
        {
            auto &stream = streams[static_cast<std::size_t>(u)];
            if (model == LmSignalModel::WhiteDD)
            {
                stream.N = N;
                stream.M = M;
                stream.data.resize(n);
                for (Eigen::Index i = 0; i < n; ++i)
                    stream.data(i) = complex_gaussian(rng, 1.0);
                continue;
            }
            // Variance 1/N per TF symbol gives unit power per DD element after the transform.
            for (auto &s : lm_symbols)
                s = complex_gaussian(rng, 1.0 / N);
            stream = noma::embed_lm_signal(u, lm_symbols, N, M);
        }
        for (Eigen::Index i = 0; i < n; ++i)
            noise(i) = complex_gaussian(rng, noise_var);

        const auto composite = noma::superpose(streams, alloc);
        const Eigen::VectorXcd desired = std::sqrt(p0) * (G_desired * hm.data);
        const Eigen::VectorXcd equalized = G_full * composite.data + G * noise;
        sig_power[static_cast<std::size_t>(f)] = desired.squaredNorm() / static_cast<double>(n);
        rest_power[static_cast<std::size_t>(f)] = (equalized - desired).squaredNorm() / static_cast<double>(n);
    }

    double sig_sum = 0.0;
    double rest_sum = 0.0;
    for (long f = 0; f < frames; ++f)
    {
        sig_sum += sig_power[static_cast<std::size_t>(f)];
        rest_sum += rest_power[static_cast<std::size_t>(f)];
    }
    result.symbols = frames * n;
    result.signal_power = sig_sum / frames;
    result.residual_power = rest_sum / frames;
    result.gamma_empirical = rest_sum > 0.0 ? sig_sum / rest_sum : std::numeric_limits<double>::infinity();

    // Delta-method standard error of the ratio estimator.
    if (frames > 1 && rest_sum > 0.0)
    {
        double acc = 0.0;
        for (long f = 0; f < frames; ++f)
        {
            const double d = sig_power[static_cast<std::size_t>(f)] -
                             result.gamma_empirical * rest_power[static_cast<std::size_t>(f)];
            acc += d * d;
        }
        const double var = acc / static_cast<double>(frames - 1);
        result.std_error = std::sqrt(var / static_cast<double>(frames)) / result.residual_power;
    }
    return result;
}

} // namespace ddlink::equalizer
