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

#include "ddlink/simkit.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "ddlink/channel.hpp"

namespace ddlink::simkit {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// splitmix64 finalizer
std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

double average(const std::vector<double> &v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double minimum(const std::vector<double> &v)
{
    return v.empty() ? 0.0 : *std::min_element(v.begin(), v.end());
}


equalizer::OmegaTerms hm_omegas(const channel::HMChannelRealization &ch, const SystemConfig &cfg,
                                 const Eigen::VectorXcd &v)
{
    const auto spectra = channel::hm_eigen_spectra(ch, cfg.doppler_bins, cfg.delay_bins);
    const auto spec = equalizer::mmse_spectrum(spectra.lambda_M, v, cfg.mmse_regularizer);
    return equalizer::omega_terms_hm(spec, spectra.lambda_M, spectra.lambda_I, v);
}

std::vector<noma::UserRates> rates_over_grid(const SystemConfig &cfg, const equalizer::OmegaTerms &hm,
                                             const std::vector<equalizer::OmegaTerms> &lm,
                                             const noma::PowerAllocation &alloc,
                                             const std::vector<std::complex<double>> &gains)
{
    std::vector<noma::UserRates> out;
    out.reserve(cfg.rho_t_db.size());
    for (double db : cfg.rho_t_db)
    {
        const double rho_t = db_to_linear(db);
        equalizer::LinkSNRs snrs;
        snrs.gamma_0 = equalizer::hm_snr(hm, cfg.hm_power, rho_t);
        for (int u = 1; u <= cfg.lm_users; ++u)
        {
            const auto idx = static_cast<std::size_t>(u - 1);
            snrs.gamma_0u.push_back(equalizer::hm_at_lm_snr(lm[idx], cfg.hm_power, rho_t));
            snrs.gamma_u.push_back(equalizer::lm_snr(alloc.lm(u), rho_t, gains[idx]));
        }
        out.push_back(noma::assemble_rates(snrs, cfg.lm_min));
    }
    return out;
}

} // namespace

std::uint64_t derive_trial_seed(std::uint64_t master_seed, std::uint64_t trial_index) noexcept
{
    return mix64(mix64(master_seed) ^ mix64(trial_index ^ 0xD1B54A32D192ED03ULL));
}

TrialResult run_trial(const SystemConfig &cfg, std::uint64_t trial_seed, std::uint64_t trial_index)
{
    cfg.validate();
    channel::Rng rng(trial_seed);
    const auto hm = channel::sample_hm_channel(cfg, rng);
    std::vector<channel::LMChannelRealization> lm;
    lm.reserve(static_cast<std::size_t>(cfg.lm_users));
    for (int u = 1; u <= cfg.lm_users; ++u)
        lm.push_back(channel::sample_lm_channel(cfg, u, rng));

    const Eigen::VectorXcd v = equalizer::uniform_weights(cfg.antennas);
    const int N = cfg.doppler_bins;
    const int M = cfg.delay_bins;

    std::vector<equalizer::OmegaTerms> lm_omega;
    std::vector<std::complex<double>> gains;
    for (const auto &ch : lm)
    {
        const Eigen::MatrixXcd lambda = channel::lm_eigen_spectra(ch, N, M);
        const auto spec = equalizer::mmse_spectrum(lambda, v, cfg.mmse_regularizer);
        lm_omega.push_back(equalizer::omega_terms_lm(spec, lambda, v));
        gains.push_back(channel::lm_effective_gain(ch, v, ch.user - 1, M));
    }
    const auto alloc = noma::allocate_power(cfg.hm_power, gains);

    TrialResult result;
    result.trial_index = trial_index;
    result.seed = trial_seed;
    if (cfg.mode != ChannelMode::Ideal)
    {
        result.omega_real = hm_omegas(hm, cfg, v);
        result.rates_real = rates_over_grid(cfg, result.omega_real, lm_omega, alloc, gains);
    }
    if (cfg.mode != ChannelMode::Real)
    {
        result.omega_ideal = hm_omegas(hm.without_fractional_doppler(), cfg, v);
        result.rates_ideal = rates_over_grid(cfg, result.omega_ideal, lm_omega, alloc, gains);
    }
    return result;
}

SweepSummary run_sweep(const SystemConfig &cfg, int workers)
{
    cfg.validate();
    if (workers < 1)
        throw std::invalid_argument("worker count must be >= 1");

    const auto trials = static_cast<std::size_t>(cfg.trials);
    const std::size_t grid = cfg.rho_t_db.size();
    const bool has_real = cfg.mode != ChannelMode::Ideal;
    const bool has_ideal = cfg.mode != ChannelMode::Real;

    SweepSummary summary;
    summary.samples.resize(grid);
    for (auto &s : summary.samples)
    {
        if (has_real)
            s.se_hm_real.resize(trials);
        if (has_ideal)
            s.se_hm_ideal.resize(trials);
        s.se_hm_at_lm_mean.resize(trials);
        s.se_hm_at_lm_min.resize(trials);
        s.se_lm_mean.resize(trials);
        s.se_lm_min.resize(trials);
        s.se_lm_worst.resize(trials);
    }

    // Each trial writes only its own slot, so scheduling cannot change the result.
    auto record = [&](std::size_t t) {
        const auto trial = run_trial(cfg, derive_trial_seed(cfg.master_seed, t), t);
        const auto &lm_side = has_real ? trial.rates_real : trial.rates_ideal;
        for (std::size_t g = 0; g < grid; ++g)
        {
            auto &s = summary.samples[g];
            if (has_real)
                s.se_hm_real[t] = trial.rates_real[g].se_hm;
            if (has_ideal)
                s.se_hm_ideal[t] = trial.rates_ideal[g].se_hm;
            const auto &r = lm_side[g];
            s.se_hm_at_lm_mean[t] = average(r.se_hm_at_lm);
            s.se_hm_at_lm_min[t] = minimum(r.se_hm_at_lm);
            s.se_lm_mean[t] = average(r.se_lm);
            s.se_lm_min[t] = minimum(r.se_lm);
            s.se_lm_worst[t] = r.se_lm_min;
        }
    };

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&] {
        try
        {
            for (std::size_t t = next.fetch_add(1); t < trials; t = next.fetch_add(1))
                record(t);
        }
        catch (...)
        {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = trials;
        }
    };

    const auto pool_size = static_cast<std::size_t>(std::min<long long>(workers, cfg.trials));
    if (pool_size <= 1)
        work();
    else
    {
        std::vector<std::jthread> pool;
        pool.reserve(pool_size);
        for (std::size_t w = 0; w < pool_size; ++w)
            pool.emplace_back(work);
    }
    if (failure)
        std::rethrow_exception(failure);

    summary.points.reserve(grid);
    for (std::size_t g = 0; g < grid; ++g)
    {
        const auto &s = summary.samples[g];
        SweepPoint pt;
        pt.rho_t_db = cfg.rho_t_db[g];
        pt.p0 = cfg.hm_power;
        pt.trials = cfg.trials;

        pt.se_hm_real_mean = has_real ? mean(s.se_hm_real) : kNaN;
        pt.se_hm_real_stderr = has_real ? standard_error(s.se_hm_real) : kNaN;
        pt.se_hm_ideal_mean = has_ideal ? mean(s.se_hm_ideal) : kNaN;
        pt.se_hm_ideal_stderr = has_ideal ? standard_error(s.se_hm_ideal) : kNaN;
        if (has_real && has_ideal)
        {
            std::vector<double> diff(trials);
            for (std::size_t t = 0; t < trials; ++t)
                diff[t] = s.se_hm_ideal[t] - s.se_hm_real[t];
            pt.gap = pt.se_hm_ideal_mean - pt.se_hm_real_mean;
            pt.gap_stderr = standard_error(diff);
        }
        else
        {
            pt.gap = kNaN;
            pt.gap_stderr = kNaN;
        }

        pt.se_hm_at_lm_mean = mean(s.se_hm_at_lm_mean);
        pt.se_hm_at_lm_mean_stderr = standard_error(s.se_hm_at_lm_mean);
        pt.se_hm_at_lm_min = mean(s.se_hm_at_lm_min);
        pt.se_hm_at_lm_min_stderr = standard_error(s.se_hm_at_lm_min);
        pt.se_lm_mean = mean(s.se_lm_mean);
        pt.se_lm_mean_stderr = standard_error(s.se_lm_mean);
        pt.se_lm_min = mean(s.se_lm_min);
        pt.se_lm_min_stderr = standard_error(s.se_lm_min);
        pt.se_lm_worst = mean(s.se_lm_worst);
        pt.se_lm_worst_stderr = standard_error(s.se_lm_worst);

        pt.outage_real = has_real ? outage(s.se_hm_real, cfg.rate_threshold) : kNaN;
        pt.outage_ideal = has_ideal ? outage(s.se_hm_ideal, cfg.rate_threshold) : kNaN;
        summary.points.push_back(pt);
    }
    return summary;
}

double outage(std::span<const double> samples, double threshold)
{
    if (samples.empty())
        throw std::invalid_argument("outage needs at least one sample");
    std::size_t below = 0;
    for (double x : samples)
        if (x < threshold)
            ++below;
    return static_cast<double>(below) / static_cast<double>(samples.size());
}

double mean(std::span<const double> samples)
{
    if (samples.empty())
        return kNaN;
    double s = 0.0;
    for (double x : samples)
        s += x;
    return s / static_cast<double>(samples.size());
}

double standard_error(std::span<const double> samples)
{
    const std::size_t n = samples.size();
    if (n < 2)
        return 0.0;
    const double m = mean(samples);
    double acc = 0.0;
    for (double x : samples)
        acc += (x - m) * (x - m);
    return std::sqrt(acc / static_cast<double>(n - 1) / static_cast<double>(n));
}

} // namespace ddlink::simkit
