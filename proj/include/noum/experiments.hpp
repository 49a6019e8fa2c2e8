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

#ifndef NOUM_EXPERIMENTS_HPP
#define NOUM_EXPERIMENTS_HPP

#include "noum/model.hpp"
#include "noum/scenarios.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace noum
{
    class ConfigError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    class InfeasibleAbort : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    enum class ExperimentKind
    {
        rate_region,
        wsr_vs_snr,
        ee_vs_multicast_threshold,
        ee_vs_dynamic_power,
        convergence_trace,
        scheduling_compare
    };

    std::string to_string(ExperimentKind k);
    ExperimentKind parse_experiment_kind(const std::string &name); // throws ConfigError

    enum class Objective
    {
        wsr,
        ee
    };

    // SNR and circuit powers stay in dB and dBm here; they are converted when solver instances are built.
    struct ExperimentConfig
    {
        ExperimentKind experiment = ExperimentKind::rate_region;
        ScenarioSpec scenario;
        std::uint64_t seed = 0;
        std::vector<StrategyKind> strategies;

        std::vector<double> snr_db;
        std::vector<double> threshold_table; // Aligned with snr_db, applied to every message; empty means qos
        QosSpec qos;
        WeightVector weights;

        double weight_step = 0.05; // Inner step of the log10 weight grid
        bool individual_ee = false; // EE region over the weight grid with C_0 = R_0^th
        std::vector<double> multicast_thresholds;
        std::vector<double> dynamic_power_dbm;
        Objective objective = Objective::wsr; // convergence_trace only

        double amplifier_efficiency = 0.35;
        double static_power_dbm = 30.0;
        double dynamic_power_dbm_default = 27.0;

        AlgorithmConfig algorithm;
        int realizations = 20; // random_gaussian scenarios
        int pool_size = 20;    // scheduling_compare candidates
        std::vector<double> taus; // scheduling_compare CSIT exponents

        std::string output = "results";
        bool paper_scale = false;
    };

    // Parses and validates a JSON document; unknown keys and missing required fields throw ConfigError.
    ExperimentConfig parse_config(const std::string &json_text);
    ExperimentConfig load_config(const std::string &path);

    struct RunOptions
    {
        std::optional<std::uint64_t> seed;
        std::optional<std::vector<StrategyKind>> strategies;
        std::optional<std::string> out_dir;
        bool paper_scale = false;
        int jobs = 1;
        bool strict = false; // Abort with InfeasibleAbort on the first infeasible instance
    };

    // Applies overrides and scale, then validates again.
    ExperimentConfig effective_config(ExperimentConfig cfg, const RunOptions &opt);

    // log10 weight exponents: -3, -1, -1 + step, ..., 1, 3.
    std::vector<double> weight_grid_exponents(double step);

    // Per-SNR threshold table for SNR 0, 5, ..., 30 dB.
    std::vector<double> default_threshold_table();

    struct ResultRow
    {
        int point = 0;
        int realization = 0;
        std::string sweep;
        double sweep_value = 0.0;
        double snr_db = 0.0;
        std::uint64_t seed = 0;
        std::string scenario_hash;
        std::vector<int> users; // 0-based selected users
        std::string scheduler = "-";
        std::string strategy;
        std::string order;
        std::string origin;
        std::string status;
        int iterations = 0;
        double wsr = 0.0;
        double ee = 0.0;
        double total_power = 0.0;
        double multicast_rate = 0.0;
        std::vector<double> user_rates;
        bool time_sharing = false;
        double wall_seconds = 0.0; // Timing sidecar only
        bool feasible = true;
    };

    struct TraceRow
    {
        int point = 0;
        int realization = 0;
        std::string strategy;
        std::string order;
        std::string origin;
        int iteration = 0;
        double objective = 0.0;
    };

    struct ExperimentResult
    {
        std::vector<ResultRow> rows; // Sorted by (point, realization, strategy order of the config)
        std::vector<TraceRow> trace;
        int infeasible = 0;
    };

    ExperimentResult run_experiment(const ExperimentConfig &cfg, int jobs = 1, bool strict = false);

    std::string csv_header();
    std::string to_csv(const ExperimentResult &res, const ExperimentConfig &cfg);
    std::string timing_csv(const ExperimentResult &res);
    std::string trace_csv(const ExperimentResult &res);

    // FNV-1a 64 as 16 hex digits.
    std::string hash_hex(const std::string &text);

    // Canonical JSON of the effective configuration, hashed into the metadata sidecar.
    std::string config_json(const ExperimentConfig &cfg);

    // Writes <out>/<experiment>.csv, .timing.csv, .meta.json and, for traces, .trace.csv. Returns the CSV path.
    std::string write_outputs(const ExperimentResult &res, const ExperimentConfig &cfg, const std::string &out_dir,
                              int jobs);

} // namespace noum

#endif
