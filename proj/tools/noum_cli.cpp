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

#include "CLI11.hpp"

#include <cstdint>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

namespace
{
    constexpr int exit_ok = 0;
    constexpr int exit_failure = 1;
    constexpr int exit_config = 2;
    constexpr int exit_infeasible = 3;

    std::vector<noum::StrategyKind> parse_strategy_list(const std::string &text)
    {
        std::vector<noum::StrategyKind> out;
        std::stringstream ss(text);
        std::string item;
        while (std::getline(ss, item, ','))
        {
            if (item.empty())
                continue;
            try
            {
                out.push_back(noum::parse_strategy_kind(item));
            }
            catch (const std::invalid_argument &e)
            {
                throw noum::ConfigError(std::string("--strategies: ") + e.what());
            }
        }
        if (out.empty())
            throw noum::ConfigError("--strategies: empty list");
        return out;
    }
} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"noum: batch experiment runner for precoder optimization strategies"};
    app.set_version_flag("--version", std::string("noum ") + NOUM_VERSION);
    app.require_subcommand(1);

    CLI::App *run = app.add_subcommand("run", "Run one experiment config file");
    std::string config_path;
    std::uint64_t seed = 0;
    std::string out_dir;
    std::string strategies;
    int jobs = 1;
    bool paper_scale = false;
    bool strict = false;
    run->add_option("config", config_path, "JSON experiment config")->required();
    auto *seed_opt = run->add_option("--seed", seed, "Override the config seed");
    run->add_flag("--paper-scale", paper_scale, "Use 100 realizations and 1000 CSIT samples");
    auto *out_opt = run->add_option("--out", out_dir, "Output directory");
    auto *strat_opt = run->add_option("--strategies", strategies, "Comma-separated strategy names");
    run->add_option("--jobs", jobs, "Worker threads")->check(CLI::PositiveNumber);
    run->add_flag("--strict", strict, "Exit with code 3 on the first infeasible instance");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config;
    }

    noum::ExperimentConfig cfg;
    noum::RunOptions opt;
    try
    {
        if (seed_opt->count())
            opt.seed = seed;
        if (out_opt->count())
            opt.out_dir = out_dir;
        if (strat_opt->count())
            opt.strategies = parse_strategy_list(strategies);
        opt.paper_scale = paper_scale;
        opt.jobs = jobs;
        opt.strict = strict;
        cfg = noum::effective_config(noum::load_config(config_path), opt);
    }
    catch (const noum::ConfigError &e)
    {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return exit_config;
    }

    try
    {
        const noum::ExperimentResult res = noum::run_experiment(cfg, opt.jobs, opt.strict);
        const std::string path = noum::write_outputs(res, cfg, cfg.output, opt.jobs);
        std::printf("%s: %zu rows, %d infeasible -> %s\n", noum::to_string(cfg.experiment).c_str(), res.rows.size(),
                    res.infeasible, path.c_str());
    }
    catch (const noum::InfeasibleAbort &e)
    {
        std::fprintf(stderr, "aborted: %s\n", e.what());
        return exit_infeasible;
    }
    catch (const std::exception &e)
    {
        std::fprintf(stderr, "error: %s\n", e.what());
        return exit_failure;
    }
    return exit_ok;
}
