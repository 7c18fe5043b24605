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
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "ddlink/config.hpp"
#include "ddlink/errors.hpp"
#include "ddlink/simkit.hpp"

namespace ddlink::cli {

inline constexpr const char *kToolVersion = "0.1.0";

/// Process exit codes.
enum ExitCode : int
{
    kExitOk = 0,
    kExitValidationFailed = 1,
    kExitConfigError = 2,
    kExitIoError = 3,
};

/// Input was not a JSON document.
class ParseError : public Error
{
public:
    using Error::Error;
};

class IoError : public Error
{
public:
    using Error::Error;
};

/// Resolved configuration plus provenance, written next to every result file.
struct RunManifest
{
    std::string command;
    SystemConfig config;
    std::string version = kToolVersion;
    std::string timestamp;
    std::uint64_t master_seed = 0;
    int workers = 1;
    std::vector<std::string> outputs;
};

/// Flat JSON document -> config. Unknown keys are rejected, missing keys take
/// their defaults and the result is validated.
SystemConfig config_from_json(const nlohmann::json &doc);
nlohmann::json config_to_json(const SystemConfig &cfg);

/// Throws IoError, ParseError or ValidationError.
SystemConfig load_config(const std::filesystem::path &path);

nlohmann::json manifest_to_json(const RunManifest &manifest);
RunManifest manifest_from_json(const nlohmann::json &doc);
RunManifest load_manifest(const std::filesystem::path &path);

/// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

struct CommandOptions
{
    std::filesystem::path out_dir = ".";
    int workers = 1;
};

/// Fixed CSV headers.
inline constexpr const char *kHmSweepHeader =
    "rho_t_db,p0,se_hm_real_mean,se_hm_real_stderr,se_hm_ideal_mean,se_hm_ideal_stderr,gap";
inline constexpr const char *kLmSweepHeader =
    "rho_t_db,p0,se_hm_at_lm_mean,se_hm_at_lm_mean_stderr,se_hm_at_lm_min,se_hm_at_lm_min_stderr,"
    "se_lm_mean,se_lm_mean_stderr,se_lm_min,se_lm_min_stderr,se_lm_worst,se_lm_worst_stderr";
inline constexpr const char *kOutageHeader = "rho_t_db,p0,r_th,outage_real,outage_ideal";

/// Power factors swept by hm-sweep and lm-sweep.
inline const std::vector<double> kFigurePowerFactors = {0.5, 0.8};
/// Rate thresholds always reported by the outage command (cfg.rate_threshold is added).
inline const std::vector<double> kOutageThresholds = {0.3, 0.6};

/// HM spectral efficiency, Real vs Ideal, for each power factor. Returns the written files.
std::vector<std::filesystem::path> cmd_hm_sweep(const SystemConfig &cfg, const CommandOptions &opts);
/// LM-side HM detection and LM detection spectral efficiency for each power factor.
std::vector<std::filesystem::path> cmd_lm_sweep(const SystemConfig &cfg, const CommandOptions &opts);
/// HM outage vs rho_T at cfg.hm_power for each threshold.
std::vector<std::filesystem::path> cmd_outage(const SystemConfig &cfg, const CommandOptions &opts);

struct CheckResult
{
    std::string name;
    bool passed = false;
    std::string detail;
};

/// Runs the oracle and invariant checks, writing one line per check to `report`.
std::vector<CheckResult> run_validation(const SystemConfig &cfg, std::ostream &report);

/// kExitOk when every check passes, kExitValidationFailed otherwise.
int cmd_validate(const SystemConfig &cfg, std::ostream &report);

/// Command-line entry point; returns the process exit code.
int run(int argc, char **argv);

} // namespace ddlink::cli
