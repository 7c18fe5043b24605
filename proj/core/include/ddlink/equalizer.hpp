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
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ddlink/channel.hpp"
#include "ddlink/config.hpp"

namespace ddlink::equalizer {

using cplx = std::complex<double>;

/// Diagonal MMSE equalizer in the spectral domain.
struct EqualizerSpectrum
{
    Eigen::VectorXcd delta;   ///< one coefficient per spectral index
    double rho = 1.0;
    Eigen::VectorXcd weights; ///< beamforming weights v_a
};

struct OmegaTerms
{
    double omega_E = 0.0; ///< equalized desired-signal power
    double omega_F = 0.0; ///< equalized IDI power
    double omega_0 = 0.0; ///< noise enhancement
    std::optional<double> omega_T; ///< LM side: equalized HM-signal power
    std::optional<double> omega_U; ///< LM side: noise enhancement
};

struct LinkSNRs
{
    double gamma_0 = 0.0;          ///< HM user detecting its own signal
    std::vector<double> gamma_0u;  ///< LM user u detecting the HM signal (SIC stage)
    std::vector<double> gamma_u;   ///< LM user u detecting its own signal
};

/// v_a = 1 / sqrt(A)
Eigen::VectorXcd uniform_weights(int antennas);

/// sum_a v_a lambda_{a,i} for every spectral index i.
Eigen::VectorXcd combine(const Eigen::MatrixXcd &lambda, const Eigen::VectorXcd &weights);

/// delta_i = conj(c_i) / (|c_i|^2 + rho) with c = combine(lambda, v).
/// Throws std::invalid_argument unless rho > 0.
EqualizerSpectrum mmse_spectrum(const Eigen::MatrixXcd &lambda, const Eigen::VectorXcd &weights,
                                double rho);

OmegaTerms omega_terms_hm(const EqualizerSpectrum &spec, const Eigen::MatrixXcd &lambda_M,
                          const Eigen::MatrixXcd &lambda_I, const Eigen::VectorXcd &weights);

/// Fills omega_T and omega_U for an LM receiver equalizing its own channel.
OmegaTerms omega_terms_lm(const EqualizerSpectrum &spec_u, const Eigen::MatrixXcd &lambda_u,
                          const Eigen::VectorXcd &weights);

/// gamma_0 = p0 rT wE / ((1 - p0) rT wE + rT wF + w0).
/// Throws DegenerateSpectrum when omega_0 == 0.
double hm_snr(const OmegaTerms &omega, double p0, double rho_t);

/// gamma_{0,u} = p0 rT wT / ((1 - p0) rT wT + wU), the LM powers summing to 1 - p0.
/// Throws DegenerateSpectrum when omega_U == 0.
double hm_at_lm_snr(const OmegaTerms &omega, double p0, double rho_t);
double hm_at_lm_snr(const EqualizerSpectrum &spec_u, const Eigen::MatrixXcd &lambda_u,
                    const Eigen::VectorXcd &weights, double p0, double rho_t);

/// gamma_u = p_u rT |H_u|^2
double lm_snr(double p_u, double rho_t, cplx effective_gain);

/// Relative residual max|Delta_T - (Delta_E + Delta_F)| / max|Delta_T| over the
/// spectral grid, where Delta_T is built from lambda_full. Returns the absolute
/// residual when Delta_T vanishes.
double verify_decomposition(const EqualizerSpectrum &spec, const channel::EigenSpectra &spectra,
                            const Eigen::VectorXcd &weights);

struct OracleResult
{
    double gamma_empirical = 0.0;
    double std_error = 0.0;
    double gamma_analytic = 0.0;
    double signal_power = 0.0;   ///< mean per-symbol power of the equalized desired branch
    double residual_power = 0.0; ///< mean per-symbol power of everything else
    long symbols = 0;
};

/// How the oracle generates the LM users' DD streams.
enum class LmSignalModel
{
    WhiteDD,             ///< i.i.d. unit-power DD symbols, the statistics hm_snr assumes
    SubcarrierEmbedded,  ///< unit-power symbols on subcarrier u-1 only, mapped to DD
};

/// Monte Carlo check of hm_snr: pushes random unit-power DD frames for the HM
/// and LM users through the dense channel, adds noise of variance 1/rho_t,
/// applies the MMSE detector and splits the output into the desired branch
/// sqrt(p0) G H_M s_0 and the remainder. Uses cfg.hm_power and the
/// inverse-gain allocation for the LM users.
///
/// Subcarrier-embedded LM streams occupy a single delay frequency each, so
/// their equalized power is not (1 - p0) omega_E for a given realization;
/// that model measures the gap to the closed form rather than matching it.
OracleResult signal_level_oracle(const channel::HMChannelRealization &ch,
                                 const std::vector<channel::LMChannelRealization> &lm_set,
                                 const SystemConfig &cfg, double rho_t, long symbols,
                                 channel::Rng &rng, LmSignalModel model = LmSignalModel::WhiteDD);

} // namespace ddlink::equalizer
