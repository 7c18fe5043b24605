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

#include "ddlink/config.hpp"

#include <cmath>

#include "ddlink/errors.hpp"

namespace ddlink {

double SystemConfig::max_doppler() const noexcept
{
    if (max_doppler_hz)
        return *max_doppler_hz;
    const double speed_mps = max_speed_kmh / 3.6;
    return speed_mps * carrier_hz / kSpeedOfLight;
}

int SystemConfig::max_doppler_tap() const noexcept
{
    return static_cast<int>(std::floor(max_doppler() * doppler_bins * symbol_period_s()));
}

void SystemConfig::validate() const
{
    auto require = [](bool ok, const char *key, const char *constraint) {
        if (!ok)
            throw ValidationError(key, constraint);
    };
    require(antennas >= 1, "A", "must be >= 1");
    require(doppler_bins >= 1, "N", "must be >= 1");
    require(delay_bins >= 1, "M", "must be >= 1");
    require(lm_users >= 1, "U", "must be >= 1");
    require(lm_users <= delay_bins, "U", "U <= M required (one subcarrier per LM user)");
    require(hm_paths >= 1, "L0", "must be >= 1");
    require(max_delay_tap >= 0, "l_max", "must be >= 0");
    require(max_delay_tap < delay_bins, "l_max", "must be < M");
    require(subpath_halfwidth >= 0, "N_p", "must be >= 0");
    require(2 * subpath_halfwidth < doppler_bins, "N_p", "N_p < N/2 required");
    require(lm_max_paths >= 1, "lm_max_paths", "must be >= 1");
    require(std::isfinite(subcarrier_spacing_hz) && subcarrier_spacing_hz > 0, "delta_f",
            "must be > 0");
    require(std::isfinite(carrier_hz) && carrier_hz > 0, "f_c", "must be > 0");
    require(std::isfinite(max_speed_kmh) && max_speed_kmh >= 0, "v_max_kmh", "must be >= 0");
    if (max_doppler_hz)
        require(std::isfinite(*max_doppler_hz) && *max_doppler_hz >= 0, "nu_max_hz",
                "must be >= 0");
    require(max_doppler_tap() <= doppler_bins / 2, "nu_max_hz",
            "integer Doppler span floor(nu_max*N*T) must not exceed N/2");
    require(std::isfinite(mmse_regularizer) && mmse_regularizer > 0, "rho", "must be > 0");
    require(hm_power >= 0.0 && hm_power <= 1.0, "p0", "p0 in [0, 1] required");
    require(!rho_t_db.empty(), "rho_t_db", "must not be empty");
    for (double db : rho_t_db)
        require(std::isfinite(db), "rho_t_db", "entries must be finite");
    require(std::isfinite(rate_threshold) && rate_threshold >= 0, "R_th", "must be >= 0");
    require(trials >= 1, "trials", "must be >= 1");
}

std::string_view to_string(ChannelMode mode) noexcept
{
    switch (mode)
    {
    case ChannelMode::Real:
        return "real";
    case ChannelMode::Ideal:
        return "ideal";
    case ChannelMode::Both:
        break;
    }
    return "both";
}

std::string_view to_string(LmMinConvention convention) noexcept
{
    return convention == LmMinConvention::WorstStage ? "worst_stage" : "lm_detection";
}

std::optional<ChannelMode> parse_channel_mode(std::string_view text) noexcept
{
    if (text == "real")
        return ChannelMode::Real;
    if (text == "ideal")
        return ChannelMode::Ideal;
    if (text == "both")
        return ChannelMode::Both;
    return std::nullopt;
}

std::optional<LmMinConvention> parse_lm_min_convention(std::string_view text) noexcept
{
    if (text == "worst_stage")
        return LmMinConvention::WorstStage;
    if (text == "lm_detection")
        return LmMinConvention::LmDetectionOnly;
    return std::nullopt;
}

double db_to_linear(double db) noexcept
{
    return std::pow(10.0, db / 10.0);
}

} // namespace ddlink
