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
#include <span>
#include <vector>

#include "ddlink/config.hpp"
#include "ddlink/ddgrid.hpp"
#include "ddlink/equalizer.hpp"

namespace ddlink::noma {

using cplx = std::complex<double>;

/// Power split across users; index 0 is the HM user, 1..U the LM users.
struct PowerAllocation
{
    std::vector<double> p;

    double hm() const { return p.at(0); }
    double lm(int user) const { return p.at(static_cast<std::size_t>(user)); }
    int lm_users() const noexcept { return static_cast<int>(p.size()) - 1; }
};

struct UserRates
{
    double se_hm = 0.0;
    std::vector<double> se_hm_at_lm;
    std::vector<double> se_lm;
    double se_lm_min = 0.0;
};

/// p_u = (1 - p0) (1/|H_u|) / sum_i (1/|H_i|). Stronger LM users get less power.
/// Throws ZeroGain if any |H_u| is zero, std::invalid_argument if p0 is outside [0, 1].
PowerAllocation allocate_power(double p0, std::span<const cplx> lm_gains);

/// Places N time-slot symbols on subcarrier user-1 and maps the TF grid to the DD domain.
ddgrid::DDVector embed_lm_signal(int user, std::span<const cplx> symbols, int N, int M);

/// s = sum_u sqrt(p_u) s_u. Throws std::invalid_argument on mismatched sizes.
ddgrid::DDVector superpose(std::span<const ddgrid::DDVector> signals, const PowerAllocation &alloc);

/// log2(1 + gamma)
double spectral_efficiency(double gamma);

UserRates assemble_rates(const equalizer::LinkSNRs &snrs,
                         LmMinConvention convention = LmMinConvention::WorstStage);

} // namespace ddlink::noma
