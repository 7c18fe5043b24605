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

#include "ddlink/noma.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ddlink/errors.hpp"

namespace ddlink::noma {

PowerAllocation allocate_power(double p0, std::span<const cplx> lm_gains)
{
    if (!(p0 >= 0.0 && p0 <= 1.0))
        throw std::invalid_argument("p0 must lie in [0, 1]");

    std::vector<double> inverse(lm_gains.size());
    double total = 0.0;
    for (std::size_t u = 0; u < lm_gains.size(); ++u)
    {
        const double mag = std::abs(lm_gains[u]);
        if (mag == 0.0)
            throw ZeroGain(static_cast<int>(u) + 1);
        inverse[u] = 1.0 / mag;
        total += inverse[u];
    }

    PowerAllocation alloc;
    alloc.p.reserve(lm_gains.size() + 1);
    alloc.p.push_back(p0);
    for (double w : inverse)
        alloc.p.push_back((1.0 - p0) * w / total);
    return alloc;
}

ddgrid::DDVector embed_lm_signal(int user, std::span<const cplx> symbols, int N, int M)
{
    if (user < 1 || user > M)
        throw std::invalid_argument("LM user needs a subcarrier in [0, M)");
    if (static_cast<int>(symbols.size()) != N)
        throw std::invalid_argument("LM signal needs one symbol per time slot");
    ddgrid::TFGrid tf{Eigen::MatrixXcd::Zero(N, M)};
    for (int n = 0; n < N; ++n)
        tf.data(n, user - 1) = symbols[static_cast<std::size_t>(n)];
    return ddgrid::vectorize(ddgrid::sfft(tf));
}

ddgrid::DDVector superpose(std::span<const ddgrid::DDVector> signals, const PowerAllocation &alloc)
{
    if (signals.empty())
        throw std::invalid_argument("nothing to superpose");
    if (signals.size() != alloc.p.size())
        throw std::invalid_argument("signal count does not match the power allocation");

    ddgrid::DDVector out;
    out.N = signals.front().N;
    out.M = signals.front().M;
    out.data = Eigen::VectorXcd::Zero(signals.front().data.size());
    for (std::size_t u = 0; u < signals.size(); ++u)
    {
        const auto &s = signals[u];
        if (s.N != out.N || s.M != out.M || s.data.size() != out.data.size())
            throw std::invalid_argument("superposed signals have mismatched dimensions");
        out.data += std::sqrt(alloc.p[u]) * s.data;
    }
    return out;
}

double spectral_efficiency(double gamma)
{
    if (!(gamma >= 0.0))
        throw std::invalid_argument("SNR must be nonnegative");
    return std::log2(1.0 + gamma);
}

UserRates assemble_rates(const equalizer::LinkSNRs &snrs, LmMinConvention convention)
{
    if (snrs.gamma_0u.size() != snrs.gamma_u.size())
        throw std::invalid_argument("per-user SNR vectors differ in length");

    UserRates rates;
    rates.se_hm = spectral_efficiency(snrs.gamma_0);
    rates.se_hm_at_lm.reserve(snrs.gamma_u.size());
    rates.se_lm.reserve(snrs.gamma_u.size());
    for (std::size_t u = 0; u < snrs.gamma_u.size(); ++u)
    {
        rates.se_hm_at_lm.push_back(spectral_efficiency(snrs.gamma_0u[u]));
        rates.se_lm.push_back(spectral_efficiency(snrs.gamma_u[u]));
    }

    if (rates.se_lm.empty())
        return rates;
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t u = 0; u < rates.se_lm.size(); ++u)
    {
        const double stage = convention == LmMinConvention::WorstStage
                                 ? std::min(rates.se_hm_at_lm[u], rates.se_lm[u])
                                 : rates.se_lm[u];
        worst = std::min(worst, stage);
    }
    rates.se_lm_min = worst;
    return rates;
}

} // namespace ddlink::noma
