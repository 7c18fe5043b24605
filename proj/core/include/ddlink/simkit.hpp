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
#include <span>
#include <vector>

#include "ddlink/config.hpp"
#include "ddlink/equalizer.hpp"
#include "ddlink/noma.hpp"

namespace ddlink::simkit {

/// One Monte Carlo trial evaluated on every point of the rho_T grid.
/// Real and Ideal members share every draw except the fractional Doppler.
struct TrialResult
{
    std::uint64_t trial_index = 0;
    std::uint64_t seed = 0;
    std::vector<noma::UserRates> rates_real;  ///< indexed like cfg.rho_t_db; empty in Ideal-only mode
    std::vector<noma::UserRates> rates_ideal; ///< empty in Real-only mode
    equalizer::OmegaTerms omega_real;
    equalizer::OmegaTerms omega_ideal;
};

/// Aggregates at one (rho_T, p0) sweep point. Absent variants are NaN.
struct SweepPoint
{
    double rho_t_db = 0.0;
    double p0 = 0.0;
    int trials = 0;

    double se_hm_real_mean = 0.0;
    double se_hm_real_stderr = 0.0;
    double se_hm_ideal_mean = 0.0;
    double se_hm_ideal_stderr = 0.0;
    double gap = 0.0;        ///< se_hm_ideal_mean - se_hm_real_mean
    double gap_stderr = 0.0; ///< paired standard error of the gap

    double se_hm_at_lm_mean = 0.0; ///< HM detection at LM, averaged over users
    double se_hm_at_lm_mean_stderr = 0.0;
    double se_hm_at_lm_min = 0.0;  ///< HM detection at LM, worst user
    double se_hm_at_lm_min_stderr = 0.0;
    double se_lm_mean = 0.0;       ///< LM detection, averaged over users
    double se_lm_mean_stderr = 0.0;
    double se_lm_min = 0.0;        ///< LM detection, worst user
    double se_lm_min_stderr = 0.0;
    double se_lm_worst = 0.0;      ///< worst-case LM rate under cfg.lm_min
    double se_lm_worst_stderr = 0.0;

    double outage_real = 0.0;  ///< at cfg.rate_threshold
    double outage_ideal = 0.0;
};

/// Per-trial samples at one sweep point, in trial-index order.
struct PointSamples
{
    std::vector<double> se_hm_real;
    std::vector<double> se_hm_ideal;
    std::vector<double> se_hm_at_lm_mean;
    std::vector<double> se_hm_at_lm_min;
    std::vector<double> se_lm_mean;
    std::vector<double> se_lm_min;
    std::vector<double> se_lm_worst;
};

struct SweepSummary
{
    std::vector<SweepPoint> points;
    std::vector<PointSamples> samples; ///< parallel to points
};

/// Stateless 64-bit seed for trial `trial_index`. The rho_T grid is evaluated on
/// the same draw, so the seed does not depend on the grid point.
std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept;

TrialResult run_trial(const SystemConfig &cfg, std::uint64_t trial_seed, std::uint64_t trial_index = 0);

/// Runs cfg.trials trials on `workers` threads. The result depends only on cfg.
SweepSummary run_sweep(const SystemConfig &cfg, int workers = 1);

/// Fraction of samples strictly below the threshold. Throws std::invalid_argument on empty input.
double outage(std::span<const double> samples, double threshold);

double mean(std::span<const double> samples);

/// Sample standard deviation over sqrt(n); zero for fewer than two samples.
double standard_error(std::span<const double> samples);

} // namespace ddlink::simkit
