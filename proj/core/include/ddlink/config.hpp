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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace ddlink {

/// Which channel variants a trial evaluates.
enum class ChannelMode
{
    Real,  ///< fractional Doppler present
    Ideal, ///< fractional Doppler forced to zero
    Both,
};

/// Definition of the worst-case LM-side rate.
enum class LmMinConvention
{
    WorstStage,      ///< min over users of min(SE(HM detection at LM), SE(LM detection))
    LmDetectionOnly, ///< min over users of SE(LM detection)
};

/// Scenario constants for one simulation campaign. Defaults reproduce the
/// reference scenario (4 antennas, 16x16 grid, 8 LM users, 500 km/h at 5 GHz).
struct SystemConfig
{
    int antennas = 4;            ///< A
    int doppler_bins = 16;       ///< N
    int delay_bins = 16;         ///< M
    int lm_users = 8;            ///< U
    int hm_paths = 5;            ///< L_0
    int max_delay_tap = 4;       ///< l_max
    int subpath_halfwidth = 5;   ///< N_p
    int lm_max_paths = 4;        ///< LM path count is uniform on [1, lm_max_paths]
    double subcarrier_spacing_hz = 15e3;
    double carrier_hz = 5e9;
    double max_speed_kmh = 500.0;
    std::optional<double> max_doppler_hz; ///< overrides the speed-derived value when set
    double mmse_regularizer = 1.0; ///< rho
    double hm_power = 0.5;         ///< p_0
    std::vector<double> rho_t_db = {0, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
    double rate_threshold = 0.5; ///< R_th in b/s/Hz
    int trials = 10000;
    std::uint64_t master_seed = 20240601;
    ChannelMode mode = ChannelMode::Both;
    LmMinConvention lm_min = LmMinConvention::WorstStage;

    /// N * M
    int grid_size() const noexcept { return doppler_bins * delay_bins; }
    /// T = 1 / delta_f
    double symbol_period_s() const noexcept { return 1.0 / subcarrier_spacing_hz; }
    /// Maximum Doppler shift in Hz, from the override or from v * f_c / c.
    double max_doppler() const noexcept;
    /// floor(nu_max * N * T)
    int max_doppler_tap() const noexcept;

    /// Throws ValidationError naming the first violated constraint.
    void validate() const;
};

/// Propagation speed used for the speed-to-Doppler conversion.
inline constexpr double kSpeedOfLight = 3.0e8;

std::string_view to_string(ChannelMode mode) noexcept;
std::string_view to_string(LmMinConvention convention) noexcept;
std::optional<ChannelMode> parse_channel_mode(std::string_view text) noexcept;
std::optional<LmMinConvention> parse_lm_min_convention(std::string_view text) noexcept;

/// 10^(dB/10)
double db_to_linear(double db) noexcept;

} // namespace ddlink
