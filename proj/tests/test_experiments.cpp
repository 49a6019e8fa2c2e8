// SPDX-License-Identifier: Apache-2.0
//
// noum: precoder optimization toolkit for non-orthogonal unicast and multicast transmission
// Copyright (C) 2026 The noum contributors
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

#include "noum/experiments.hpp"

#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

using namespace noum;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

namespace
{
    const char *small_run = R"({
        "experiment": "wsr_vs_snr",
        "seed": 4,
        "scenario": {"kind": "random_gaussian", "users": 2, "nt": 2, "variances": [1.0]},
        "strategies": ["mu_lp", "one_layer_rs"],
        "snr_db": [10],
        "qos": {"unicast": 0.1, "multicast": 0.1},
        "realizations": 2
    })";

    int count_lines(const std::string &s) { return static_cast<int>(std::count(s.begin(), s.end(), '\n')); }
} // namespace

TEST_CASE("defaults of a minimal rate-region config", "[experiments][config]")
{
    ExperimentConfig c = parse_config(R"({"experiment": "rate_region",
        "scenario": {"kind": "specific_two_user", "gamma": 1, "theta_deg": 80}})");
    REQUIRE(c.experiment == ExperimentKind::rate_region);
    REQUIRE(c.strategies.size() == 6);
    REQUIRE(c.snr_db == std::vector<double>{20});
    REQUIRE(c.qos.multicast_threshold == 0.5);
    REQUIRE(c.qos.unicast_thresholds == std::vector<double>{0.0, 0.0});
    REQUIRE(c.weights.multicast_weight == 1.0);
    REQUIRE(c.realizations == 1);
    REQUIRE_THAT(c.scenario.theta, WithinAbs(4 * std::numbers::pi / 9, 1e-15));
    REQUIRE(c.scenario.num_tx_antennas == 4);
}

TEST_CASE("SNR sweeps pick thresholds from the table", "[experiments][config]")
{
    ExperimentConfig c = parse_config(R"({"experiment": "wsr_vs_snr",
        "scenario": {"kind": "specific_three_user", "gamma": 1, "gamma2": 0.3, "theta_deg": 10}})");
    REQUIRE(c.snr_db.size() == 7);
    REQUIRE(c.threshold_table == default_threshold_table());
    REQUIRE(c.threshold_table[2] == 0.05);

    REQUIRE_THROWS_AS(parse_config(R"({"experiment": "wsr_vs_snr", "snr_db": [12],
        "scenario": {"kind": "specific_two_user", "theta": 1}})"),
                      ConfigError);
}

TEST_CASE("config errors", "[experiments][config]")
{
    auto fails = [](const char *text, const char *needle)
    {
        try
        {
            parse_config(text);
        }
        catch (const ConfigError &e)
        {
            CHECK_THAT(e.what(), ContainsSubstring(needle));
            return true;
        }
        return false;
    };
    REQUIRE(fails(R"({"experiment": "rate_region", "weight_stepp": 0.1,
        "scenario": {"kind": "specific_two_user", "theta": 1}})",
                  "weight_stepp"));
    REQUIRE(fails(R"({"scenario": {"kind": "specific_two_user", "theta": 1}})", "experiment"));
    REQUIRE(fails(R"({"experiment": "rate_region"})", "scenario"));
    REQUIRE(fails(R"({"experiment": "rate_region", "scenario": {"kind": "specific_two_user"}})", "theta"));
    REQUIRE(fails(R"({"experiment": "bogus", "scenario": {"kind": "specific_two_user", "theta": 1}})", "bogus"));
    REQUIRE(fails(R"({"experiment": "rate_region", "scenario": {"kind": "specific_three_user", "theta": 1}})",
                  "two users"));
    REQUIRE(fails(R"({"experiment": "rate_region", "weight_step": 0.3,
        "scenario": {"kind": "specific_two_user", "theta": 1}})",
                  "weight_step"));
    REQUIRE(fails(R"({"experiment": "ee_vs_dynamic_power",
        "scenario": {"kind": "specific_two_user", "theta": 1, "csit": {"perfect": false}}})",
                  "perfect CSIT"));
    REQUIRE(fails(R"({"experiment": "scheduling_compare",
        "scenario": {"kind": "specific_two_user", "theta": 1}})",
                  "random_gaussian"));
    REQUIRE(fails("{not json", "malformed"));
    REQUIRE(fails(R"({"experiment": "rate_region", "strategies": ["mu_lp", "mu_lp"],
        "scenario": {"kind": "specific_two_user", "theta": 1}})",
                  "repeat"));
    REQUIRE_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("weight grid", "[experiments][grid]")
{
    auto g = weight_grid_exponents(0.05);
    REQUIRE(g.size() == 43);
    REQUIRE(g.front() == -3.0);
    REQUIRE(g.back() == 3.0);
    REQUIRE(std::count_if(g.begin(), g.end(), [](double x) { return std::abs(x) < 1e-12; }) == 1);
    REQUIRE(std::is_sorted(g.begin(), g.end()));
    REQUIRE(weight_grid_exponents(0.5).size() == 7);
}

TEST_CASE("overrides and scale", "[experiments][config]")
{
    ExperimentConfig c = parse_config(small_run);
    RunOptions o;
    o.seed = 9;
    o.strategies = std::vector<StrategyKind>{StrategyKind::MU_LP};
    o.paper_scale = true;
    ExperimentConfig e = effective_config(c, o);
    REQUIRE(e.seed == 9);
    REQUIRE(e.strategies.size() == 1);
    REQUIRE(e.realizations == 100);
    REQUIRE(e.scenario.csit.samples == 1000);
    o.jobs = 0;
    REQUIRE_THROWS_AS(effective_config(c, o), ConfigError);
}

TEST_CASE("canonical configuration round trip", "[experiments][config]")
{
    ExperimentConfig c = parse_config(small_run);
    const std::string j = config_json(c);
    REQUIRE(config_json(parse_config(j)) == j);
    REQUIRE(hash_hex(j).size() == 16);
    REQUIRE(hash_hex("") == "cbf29ce484222325");
    REQUIRE(hash_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("results do not depend on the worker count", "[experiments][determinism]")
{
    ExperimentConfig c = parse_config(small_run);
    ExperimentResult a = run_experiment(c, 1);
    ExperimentResult b = run_experiment(c, 2);
    const std::string ca = to_csv(a, c);
    REQUIRE(ca == to_csv(b, c));
    REQUIRE(count_lines(ca) == 1 + 2 * 2);
    REQUIRE(ca.rfind(csv_header(), 0) == 0);
    REQUIRE(a.infeasible == 0);
    for (const ResultRow &r : a.rows)
    {
        REQUIRE(r.feasible);
        REQUIRE(r.user_rates.size() == 2);
        REQUIRE(r.wsr > 0);
    }
    REQUIRE(count_lines(timing_csv(a)) == 1 + 4);
}

TEST_CASE("infeasible instances", "[experiments][infeasible]")
{
    std::string text = small_run;
    text.replace(text.find("\"multicast\": 0.1"), 16, "\"multicast\": 50");
    ExperimentConfig c = parse_config(text);
    ExperimentResult r = run_experiment(c, 1);
    REQUIRE(r.infeasible == 4);
    REQUIRE_THAT(to_csv(r, c), ContainsSubstring(",nan,"));
    REQUIRE_THROWS_AS(run_experiment(c, 1, true), InfeasibleAbort);
}

TEST_CASE("output files", "[experiments][io]")
{
    ExperimentConfig c = parse_config(small_run);
    ExperimentResult r = run_experiment(c, 1);
    const auto dir = std::filesystem::temp_directory_path() / "noum_test_outputs";
    std::filesystem::remove_all(dir);
    const std::string path = write_outputs(r, c, dir.string(), 1);
    REQUIRE(std::filesystem::exists(path));
    REQUIRE(std::filesystem::exists(dir / "wsr_vs_snr.timing.csv"));
    REQUIRE(std::filesystem::exists(dir / "wsr_vs_snr.meta.json"));
    std::ifstream f(path);
    std::stringstream ss;
    ss << f.rdbuf();
    REQUIRE(ss.str() == to_csv(r, c));
    std::filesystem::remove_all(dir);
}

TEST_CASE("bundled example configs parse", "[experiments][config]")
{
    int seen = 0;
    for (const auto &entry : std::filesystem::directory_iterator(NOUM_CONFIG_DIR))
    {
        if (entry.path().extension() != ".json")
            continue;
        INFO(entry.path().string());
        REQUIRE_NOTHROW(load_config(entry.path().string()));
        ++seen;
    }
    REQUIRE(seen >= 6);
}
