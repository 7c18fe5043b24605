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

#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"

#include "ddlink/cli.hpp"

using namespace ddlink;
using namespace ddlink::cli;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct TempDir
{
    fs::path path;

    TempDir()
    {
        std::random_device rd;
        path = fs::temp_directory_path() / ("ddlink_test_" + std::to_string(rd()) + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir()
    {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

void write(const fs::path &p, const std::string &text)
{
    std::ofstream(p, std::ios::binary) << text;
}

int invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "ddlink-sim");
    std::vector<char *> argv;
    for (auto &a : args)
        argv.push_back(a.data());
    return run(static_cast<int>(argv.size()), argv.data());
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line))
    {
        std::vector<std::string> cells;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ','))
            cells.push_back(cell);
        rows.push_back(cells);
    }
    return rows;
}

const char *kSmall = R"({"trials": 40, "rho_t_db": [0, 10, 20]})";

} // namespace

TEST_CASE("empty config takes the defaults")
{
    const auto cfg = config_from_json(json::object());
    const SystemConfig ref;
    CHECK(cfg.antennas == 4);
    CHECK(cfg.doppler_bins == 16);
    CHECK(cfg.delay_bins == 16);
    CHECK(cfg.lm_users == 8);
    CHECK(cfg.hm_power == 0.5);
    CHECK(cfg.rho_t_db == ref.rho_t_db);
    CHECK(cfg.trials == 10000);
    CHECK(cfg.master_seed == ref.master_seed);
}

TEST_CASE("config round-trips through JSON")
{
    auto cfg = config_from_json(json::parse(R"({"A": 2, "p0": 0.7, "nu_max_hz": 1000.0, "mode": "ideal",
                                                "lm_min": "lm_detection", "master_seed": 18446744073709551615})"));
    const auto back = config_from_json(config_to_json(cfg));
    CHECK(back.antennas == 2);
    CHECK(back.hm_power == 0.7);
    CHECK(back.max_doppler_hz == 1000.0);
    CHECK(back.mode == ChannelMode::Ideal);
    CHECK(back.lm_min == LmMinConvention::LmDetectionOnly);
    CHECK(back.master_seed == 18446744073709551615ull);
}

TEST_CASE("invalid configs name the offending key")
{
    auto key_of = [](const char *text) {
        try
        {
            config_from_json(json::parse(text));
        }
        catch (const ValidationError &e)
        {
            return e.key();
        }
        return std::string("<none>");
    };
    CHECK(key_of(R"({"U": 20})") == "U");
    CHECK(key_of(R"({"p0": 1.5})") == "p0");
    CHECK(key_of(R"({"N_p": 8})") == "N_p");
    CHECK(key_of(R"({"A": 2.5})") == "A");
    CHECK(key_of(R"({"bogus": 1})") == "bogus");
    CHECK(key_of(R"({"mode": "half"})") == "mode");
    CHECK(key_of(R"({"rho_t_db": [0, "x"]})") == "rho_t_db");
    CHECK(key_of("[]") == "<root>");
}

TEST_CASE("load_config error classes")
{
    TempDir dir;
    write(dir.path / "bad.json", "{ not json");
    CHECK_THROWS_AS(load_config(dir.path / "bad.json"), ParseError);
    CHECK_THROWS_AS(load_config(dir.path / "missing.json"), IoError);
    write(dir.path / "u.json", R"({"U": 20})");
    CHECK_THROWS_AS(load_config(dir.path / "u.json"), ValidationError);
}

TEST_CASE("format_double is shortest round-trip")
{
    CHECK(format_double(0.5) == "0.5");
    CHECK(format_double(20.0) == "20");
    const double x = 0.1 + 0.2;
    CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("exit codes")
{
    TempDir dir;
    write(dir.path / "bad.json", "{ not json");
    write(dir.path / "u.json", R"({"U": 20})");
    write(dir.path / "ok.json", kSmall);
    CHECK(invoke({"hm-sweep", "--config", (dir.path / "bad.json").string(), "--out", dir.path.string()}) ==
          kExitConfigError);
    CHECK(invoke({"hm-sweep", "--config", (dir.path / "u.json").string(), "--out", dir.path.string()}) ==
          kExitConfigError);
    CHECK(invoke({"hm-sweep", "--config", (dir.path / "none.json").string(), "--out", dir.path.string()}) ==
          kExitIoError);
    CHECK(invoke({"frobnicate"}) == kExitConfigError);
    CHECK(invoke({"hm-sweep", "--config", (dir.path / "ok.json").string(), "--workers", "0"}) == kExitConfigError);

    // An output path that is a regular file cannot become a directory.
    write(dir.path / "blocker", "x");
    CHECK(invoke({"outage", "--config", (dir.path / "ok.json").string(), "--out",
                  (dir.path / "blocker" / "sub").string()}) == kExitIoError);
}

TEST_CASE("sweep outputs")
{
    TempDir dir;
    write(dir.path / "ok.json", kSmall);
    const auto cfg = dir.path / "ok.json";
    const auto out = dir.path / "out";
    REQUIRE(invoke({"hm-sweep", "--config", cfg.string(), "--out", out.string(), "--workers", "2"}) == kExitOk);
    REQUIRE(invoke({"lm-sweep", "--config", cfg.string(), "--out", out.string()}) == kExitOk);
    REQUIRE(invoke({"outage", "--config", cfg.string(), "--out", out.string()}) == kExitOk);

    const auto hm = read_csv(out / "hm_sweep.csv");
    REQUIRE(hm.size() == 1 + 2 * 3);
    CHECK(slurp(out / "hm_sweep.csv").rfind(std::string(kHmSweepHeader) + "\n", 0) == 0);
    CHECK(hm[1][1] == "0.5");
    CHECK(hm[4][1] == "0.8");
    for (std::size_t r = 1; r < hm.size(); ++r)
        CHECK(std::stod(hm[r][6]) == doctest::Approx(std::stod(hm[r][4]) - std::stod(hm[r][2])));

    const auto lm = read_csv(out / "lm_sweep.csv");
    REQUIRE(lm.size() == 7);
    CHECK(slurp(out / "lm_sweep.csv").rfind(std::string(kLmSweepHeader) + "\n", 0) == 0);

    const auto outage = read_csv(out / "outage.csv");
    CHECK(slurp(out / "outage.csv").rfind(std::string(kOutageHeader) + "\n", 0) == 0);
    REQUIRE(outage.size() == 1 + 3 * 3);
    for (std::size_t r = 1; r < outage.size(); ++r)
        for (int c : {3, 4})
        {
            const double v = std::stod(outage[r][c]);
            CHECK(v >= 0.0);
            CHECK(v <= 1.0);
        }

    const auto summary = json::parse(slurp(out / "hm_sweep_summary.json"));
    CHECK(summary.at("sweeps").size() == 2);
    const auto manifest = load_manifest(out / "hm_sweep_manifest.json");
    CHECK(manifest.command == "hm_sweep");
    CHECK(manifest.workers == 2);
    CHECK(manifest.config.trials == 40);
    CHECK(manifest.outputs.size() == 3);
}

TEST_CASE("a manifest reproduces its CSV byte for byte")
{
    TempDir dir;
    write(dir.path / "ok.json", kSmall);
    const auto first = dir.path / "first";
    const auto second = dir.path / "second";
    REQUIRE(invoke({"outage", "--config", (dir.path / "ok.json").string(), "--out", first.string(), "--seed", "77"}) ==
            kExitOk);
    REQUIRE(invoke({"outage", "--manifest", (first / "outage_manifest.json").string(), "--out", second.string(),
                    "--workers", "3"}) == kExitOk);
    CHECK(slurp(first / "outage.csv") == slurp(second / "outage.csv"));
    CHECK(load_manifest(second / "outage_manifest.json").master_seed == 77);

    // A different seed changes the numbers.
    const auto third = dir.path / "third";
    REQUIRE(invoke({"outage", "--config", (dir.path / "ok.json").string(), "--out", third.string(), "--seed", "78"}) ==
            kExitOk);
    CHECK(slurp(first / "outage.csv") != slurp(third / "outage.csv"));
}
