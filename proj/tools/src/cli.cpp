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

#include "ddlink/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

#include "CLI11.hpp"

namespace ddlink::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::set<std::string> kConfigKeys = {
    "A", "N", "M", "U", "L0", "l_max", "N_p", "lm_max_paths", "delta_f", "f_c", "v_max_kmh",
    "nu_max_hz", "rho", "p0", "rho_t_db", "R_th", "trials", "master_seed", "mode", "lm_min",
};

int get_int(const json &doc, const char *key, int fallback)
{
    if (!doc.contains(key))
        return fallback;
    const auto &v = doc.at(key);
    if (!v.is_number_integer())
        throw ValidationError(key, "must be an integer");
    const auto x = v.get<long long>();
    if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max())
        throw ValidationError(key, "out of integer range");
    return static_cast<int>(x);
}

double get_double(const json &doc, const char *key, double fallback)
{
    if (!doc.contains(key))
        return fallback;
    const auto &v = doc.at(key);
    if (!v.is_number())
        throw ValidationError(key, "must be a number");
    return v.get<double>();
}

std::string timestamp_utc()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void ensure_dir(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

void write_text(const fs::path &path, const std::string &text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    out.flush();
    if (!out)
        throw IoError("failed writing " + path.string());
}

json read_json(const fs::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot read " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    try
    {
        return json::parse(buf.str());
    }
    catch (const json::parse_error &e)
    {
        throw ParseError(path.string() + ": " + e.what());
    }
}

std::string csv_row(std::initializer_list<double> values)
{
    std::string row;
    bool first = true;
    for (double v : values)
    {
        if (!first)
            row += ',';
        row += format_double(v);
        first = false;
    }
    row += '\n';
    return row;
}

json json_number(double v)
{
    return std::isfinite(v) ? json(v) : json(nullptr);
}

json point_to_json(const simkit::SweepPoint &p)
{
    return {
        {"rho_t_db", p.rho_t_db},
        {"p0", p.p0},
        {"trials", p.trials},
        {"se_hm_real_mean", json_number(p.se_hm_real_mean)},
        {"se_hm_real_stderr", json_number(p.se_hm_real_stderr)},
        {"se_hm_ideal_mean", json_number(p.se_hm_ideal_mean)},
        {"se_hm_ideal_stderr", json_number(p.se_hm_ideal_stderr)},
        {"gap", json_number(p.gap)},
        {"gap_stderr", json_number(p.gap_stderr)},
        {"se_hm_at_lm_mean", p.se_hm_at_lm_mean},
        {"se_hm_at_lm_min", p.se_hm_at_lm_min},
        {"se_lm_mean", p.se_lm_mean},
        {"se_lm_min", p.se_lm_min},
        {"se_lm_worst", p.se_lm_worst},
        {"outage_real", json_number(p.outage_real)},
        {"outage_ideal", json_number(p.outage_ideal)},
    };
}

// Writes <name>.csv, <name>_summary.json and <name>_manifest.json.
std::vector<fs::path> emit(const std::string &name, const SystemConfig &cfg, const CommandOptions &opts,
                           const std::string &csv, const json &summary)
{
    ensure_dir(opts.out_dir);
    const fs::path csv_path = opts.out_dir / (name + ".csv");
    const fs::path summary_path = opts.out_dir / (name + "_summary.json");
    const fs::path manifest_path = opts.out_dir / (name + "_manifest.json");

    write_text(csv_path, csv);
    write_text(summary_path, summary.dump(2) + "\n");

    RunManifest manifest;
    manifest.command = name;
    manifest.config = cfg;
    manifest.timestamp = timestamp_utc();
    manifest.master_seed = cfg.master_seed;
    manifest.workers = opts.workers;
    manifest.outputs = {csv_path.filename().string(), summary_path.filename().string(),
                        manifest_path.filename().string()};
    write_text(manifest_path, manifest_to_json(manifest).dump(2) + "\n");
    return {csv_path, summary_path, manifest_path};
}

} // namespace

SystemConfig config_from_json(const json &doc)
{
    if (!doc.is_object())
        throw ValidationError("<root>", "config must be a JSON object");
    for (const auto &item : doc.items())
        if (!kConfigKeys.contains(item.key()))
            throw ValidationError(item.key(), "unknown key");

    SystemConfig cfg;
    cfg.antennas = get_int(doc, "A", cfg.antennas);
    cfg.doppler_bins = get_int(doc, "N", cfg.doppler_bins);
    cfg.delay_bins = get_int(doc, "M", cfg.delay_bins);
    cfg.lm_users = get_int(doc, "U", cfg.lm_users);
    cfg.hm_paths = get_int(doc, "L0", cfg.hm_paths);
    cfg.max_delay_tap = get_int(doc, "l_max", cfg.max_delay_tap);
    cfg.subpath_halfwidth = get_int(doc, "N_p", cfg.subpath_halfwidth);
    cfg.lm_max_paths = get_int(doc, "lm_max_paths", cfg.lm_max_paths);
    cfg.subcarrier_spacing_hz = get_double(doc, "delta_f", cfg.subcarrier_spacing_hz);
    cfg.carrier_hz = get_double(doc, "f_c", cfg.carrier_hz);
    cfg.max_speed_kmh = get_double(doc, "v_max_kmh", cfg.max_speed_kmh);
    if (doc.contains("nu_max_hz") && !doc.at("nu_max_hz").is_null())
        cfg.max_doppler_hz = get_double(doc, "nu_max_hz", 0.0);
    cfg.mmse_regularizer = get_double(doc, "rho", cfg.mmse_regularizer);
    cfg.hm_power = get_double(doc, "p0", cfg.hm_power);
    cfg.rate_threshold = get_double(doc, "R_th", cfg.rate_threshold);
    cfg.trials = get_int(doc, "trials", cfg.trials);

    if (doc.contains("rho_t_db"))
    {
        const auto &grid = doc.at("rho_t_db");
        if (!grid.is_array())
            throw ValidationError("rho_t_db", "must be an array of numbers");
        cfg.rho_t_db.clear();
        for (const auto &v : grid)
        {
            if (!v.is_number())
                throw ValidationError("rho_t_db", "must be an array of numbers");
            cfg.rho_t_db.push_back(v.get<double>());
        }
    }
    if (doc.contains("master_seed"))
    {
        const auto &v = doc.at("master_seed");
        if (!v.is_number_unsigned())
            throw ValidationError("master_seed", "must be a nonnegative integer");
        cfg.master_seed = v.get<std::uint64_t>();
    }
    if (doc.contains("mode"))
    {
        const auto &v = doc.at("mode");
        const auto mode = v.is_string() ? parse_channel_mode(v.get<std::string>()) : std::nullopt;
        if (!mode)
            throw ValidationError("mode", "must be one of \"real\", \"ideal\", \"both\"");
        cfg.mode = *mode;
    }
    if (doc.contains("lm_min"))
    {
        const auto &v = doc.at("lm_min");
        const auto conv = v.is_string() ? parse_lm_min_convention(v.get<std::string>()) : std::nullopt;
        if (!conv)
            throw ValidationError("lm_min", "must be \"worst_stage\" or \"lm_detection\"");
        cfg.lm_min = *conv;
    }

    cfg.validate();
    return cfg;
}

json config_to_json(const SystemConfig &cfg)
{
    json doc = {
        {"A", cfg.antennas},
        {"N", cfg.doppler_bins},
        {"M", cfg.delay_bins},
        {"U", cfg.lm_users},
        {"L0", cfg.hm_paths},
        {"l_max", cfg.max_delay_tap},
        {"N_p", cfg.subpath_halfwidth},
        {"lm_max_paths", cfg.lm_max_paths},
        {"delta_f", cfg.subcarrier_spacing_hz},
        {"f_c", cfg.carrier_hz},
        {"v_max_kmh", cfg.max_speed_kmh},
        {"nu_max_hz", cfg.max_doppler_hz ? json(*cfg.max_doppler_hz) : json(nullptr)},
        {"rho", cfg.mmse_regularizer},
        {"p0", cfg.hm_power},
        {"rho_t_db", cfg.rho_t_db},
        {"R_th", cfg.rate_threshold},
        {"trials", cfg.trials},
        {"master_seed", cfg.master_seed},
        {"mode", std::string(to_string(cfg.mode))},
        {"lm_min", std::string(to_string(cfg.lm_min))},
    };
    return doc;
}

SystemConfig load_config(const fs::path &path)
{
    return config_from_json(read_json(path));
}

json manifest_to_json(const RunManifest &manifest)
{
    return {
        {"command", manifest.command},
        {"config", config_to_json(manifest.config)},
        {"version", manifest.version},
        {"timestamp", manifest.timestamp},
        {"master_seed", manifest.master_seed},
        {"workers", manifest.workers},
        {"outputs", manifest.outputs},
    };
}

RunManifest manifest_from_json(const json &doc)
{
    if (!doc.is_object() || !doc.contains("config"))
        throw ValidationError("config", "manifest must carry a config object");
    RunManifest m;
    m.config = config_from_json(doc.at("config"));
    m.command = doc.value("command", std::string());
    m.version = doc.value("version", std::string());
    m.timestamp = doc.value("timestamp", std::string());
    m.master_seed = doc.value("master_seed", m.config.master_seed);
    m.workers = doc.value("workers", 1);
    m.outputs = doc.value("outputs", std::vector<std::string>{});
    return m;
}

RunManifest load_manifest(const fs::path &path)
{
    return manifest_from_json(read_json(path));
}

std::string format_double(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

std::vector<fs::path> cmd_hm_sweep(const SystemConfig &cfg, const CommandOptions &opts)
{
    std::string csv = std::string(kHmSweepHeader) + "\n";
    json summary = {{"command", "hm_sweep"}, {"sweeps", json::array()}};
    for (double p0 : kFigurePowerFactors)
    {
        SystemConfig run = cfg;
        run.hm_power = p0;
        run.mode = ChannelMode::Both;
        const auto result = simkit::run_sweep(run, opts.workers);
        json points = json::array();
        for (const auto &p : result.points)
        {
            csv += csv_row({p.rho_t_db, p.p0, p.se_hm_real_mean, p.se_hm_real_stderr, p.se_hm_ideal_mean,
                            p.se_hm_ideal_stderr, p.gap});
            points.push_back(point_to_json(p));
        }
        summary["sweeps"].push_back({{"p0", p0}, {"points", points}});
    }
    return emit("hm_sweep", cfg, opts, csv, summary);
}

std::vector<fs::path> cmd_lm_sweep(const SystemConfig &cfg, const CommandOptions &opts)
{
    std::string csv = std::string(kLmSweepHeader) + "\n";
    json summary = {{"command", "lm_sweep"}, {"lm_min", std::string(to_string(cfg.lm_min))},
                    {"sweeps", json::array()}};
    for (double p0 : kFigurePowerFactors)
    {
        SystemConfig run = cfg;
        run.hm_power = p0;
        // LM-side rates do not depend on the fractional Doppler.
        run.mode = ChannelMode::Real;
        const auto result = simkit::run_sweep(run, opts.workers);
        json points = json::array();
        for (const auto &p : result.points)
        {
            csv += csv_row({p.rho_t_db, p.p0, p.se_hm_at_lm_mean, p.se_hm_at_lm_mean_stderr, p.se_hm_at_lm_min,
                            p.se_hm_at_lm_min_stderr, p.se_lm_mean, p.se_lm_mean_stderr, p.se_lm_min,
                            p.se_lm_min_stderr, p.se_lm_worst, p.se_lm_worst_stderr});
            points.push_back(point_to_json(p));
        }
        summary["sweeps"].push_back({{"p0", p0}, {"points", points}});
    }
    return emit("lm_sweep", cfg, opts, csv, summary);
}

std::vector<fs::path> cmd_outage(const SystemConfig &cfg, const CommandOptions &opts)
{
    std::vector<double> thresholds = kOutageThresholds;
    if (std::find(thresholds.begin(), thresholds.end(), cfg.rate_threshold) == thresholds.end())
        thresholds.push_back(cfg.rate_threshold);
    std::sort(thresholds.begin(), thresholds.end());

    SystemConfig run = cfg;
    run.mode = ChannelMode::Both;
    const auto result = simkit::run_sweep(run, opts.workers);

    std::string csv = std::string(kOutageHeader) + "\n";
    json rows = json::array();
    for (double r_th : thresholds)
        for (std::size_t g = 0; g < result.points.size(); ++g)
        {
            const auto &s = result.samples[g];
            const double real = simkit::outage(s.se_hm_real, r_th);
            const double ideal = simkit::outage(s.se_hm_ideal, r_th);
            const double db = result.points[g].rho_t_db;
            csv += csv_row({db, run.hm_power, r_th, real, ideal});
            rows.push_back({{"rho_t_db", db}, {"p0", run.hm_power}, {"r_th", r_th},
                            {"outage_real", real}, {"outage_ideal", ideal}});
        }
    json summary = {{"command", "outage"}, {"trials", run.trials}, {"rows", rows}};
    return emit("outage", cfg, opts, csv, summary);
}

int cmd_validate(const SystemConfig &cfg, std::ostream &report)
{
    const auto checks = run_validation(cfg, report);
    const bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
    const auto passed = std::count_if(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
    report << passed << "/" << checks.size() << " checks passed\n";
    return ok ? kExitOk : kExitValidationFailed;
}

int run(int argc, char **argv)
{
    CLI::App app{"Delay-Doppler / NOMA downlink link-level simulator"};
    app.set_version_flag("--version", kToolVersion);
    app.require_subcommand(1);

    std::string config_path;
    std::string manifest_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    int trials = 0;
    int workers = 1;

    std::vector<CLI::Option *> seed_opts;
    auto add_common = [&](CLI::App *sub, bool with_out) {
        auto *cfg_opt = sub->add_option("--config", config_path, "JSON config (empty object for defaults)");
        auto *man_opt = sub->add_option("--manifest", manifest_path, "re-run from a run manifest");
        cfg_opt->excludes(man_opt);
        if (with_out)
            sub->add_option("--out", out_dir, "output directory");
        seed_opts.push_back(sub->add_option("--seed", seed, "override master seed"));
        sub->add_option("--trials", trials, "override trial count")->check(CLI::PositiveNumber);
        sub->add_option("--workers", workers, "worker threads")->check(CLI::PositiveNumber);
    };
    auto *hm = app.add_subcommand("hm-sweep", "HM spectral efficiency, Real vs Ideal, p0 in {0.5, 0.8}");
    auto *lm = app.add_subcommand("lm-sweep", "LM-side spectral efficiency, p0 in {0.5, 0.8}");
    auto *out = app.add_subcommand("outage", "HM outage probability vs transmit SNR");
    auto *val = app.add_subcommand("validate", "run the oracle and invariant checks");
    for (auto *sub : {hm, lm, out})
        add_common(sub, true);
    add_common(val, false);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfigError;
    }

    SystemConfig cfg;
    int manifest_workers = 0;
    try
    {
        if (!manifest_path.empty())
        {
            const auto manifest = load_manifest(manifest_path);
            cfg = manifest.config;
            manifest_workers = manifest.workers;
        }
        else if (!config_path.empty())
            cfg = load_config(config_path);
        if (std::any_of(seed_opts.begin(), seed_opts.end(), [](const CLI::Option *o) { return o->count() > 0; }))
            cfg.master_seed = seed;
        if (trials > 0)
            cfg.trials = trials;
        cfg.validate();
    }
    catch (const IoError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    catch (const Error &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    }

    CommandOptions opts;
    opts.out_dir = out_dir;
    opts.workers = workers;
    if (manifest_workers > 0 && workers == 1)
        opts.workers = manifest_workers;

    try
    {
        std::vector<fs::path> written;
        if (app.got_subcommand(val))
            return cmd_validate(cfg, std::cout);
        if (app.got_subcommand(hm))
            written = cmd_hm_sweep(cfg, opts);
        else if (app.got_subcommand(lm))
            written = cmd_lm_sweep(cfg, opts);
        else
            written = cmd_outage(cfg, opts);
        for (const auto &p : written)
            std::cout << p.string() << "\n";
        return kExitOk;
    }
    catch (const IoError &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIoError;
    }
    catch (const Error &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidationFailed;
    }
}

} // namespace ddlink::cli
