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

#include "noum/rates.hpp"
#include "noum/sca_ee.hpp"
#include "noum/wmmse.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <numbers>
#include <set>
#include <sstream>
#include <thread>

#ifndef NOUM_VERSION
#define NOUM_VERSION "unknown"
#endif

namespace noum
{
    using json = nlohmann::json;
    using ordered_json = nlohmann::ordered_json;

    namespace
    {
        constexpr double kInf = std::numeric_limits<double>::infinity();

        const std::vector<StrategyKind> kAllStrategies = {StrategyKind::MU_LP,  StrategyKind::ONE_LAYER_RS,
                                                          StrategyKind::GENERALIZED_RS, StrategyKind::SC_SIC,
                                                          StrategyKind::SC_SIC_PER_GROUP, StrategyKind::OMA};

        // Tracks consumed keys of one JSON object so leftovers can be reported.
        class Section
        {
        public:
            Section(const json &j, std::string path) : j_(j), path_(std::move(path))
            {
                if (!j_.is_object())
                    throw ConfigError(where() + "expected an object");
            }

            const json *get(const std::string &key)
            {
                seen_.insert(key);
                auto it = j_.find(key);
                return it == j_.end() ? nullptr : &*it;
            }

            std::optional<double> number(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_number())
                    throw ConfigError(where(key) + "expected a number");
                return v->get<double>();
            }

            // A number or the string "inf".
            std::optional<double> extended(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                return extended_value(*v, key);
            }

            std::optional<long long> integer(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_number_integer())
                    throw ConfigError(where(key) + "expected an integer");
                return v->get<long long>();
            }

            std::optional<std::uint64_t> unsigned_integer(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_number_unsigned())
                    throw ConfigError(where(key) + "expected a nonnegative integer");
                return v->get<std::uint64_t>();
            }

            std::optional<bool> boolean(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_boolean())
                    throw ConfigError(where(key) + "expected true or false");
                return v->get<bool>();
            }

            std::optional<std::string> string(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_string())
                    throw ConfigError(where(key) + "expected a string");
                return v->get<std::string>();
            }

            std::optional<std::vector<double>> numbers(const std::string &key, bool allow_inf = false)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (!v->is_array())
                    throw ConfigError(where(key) + "expected a list");
                std::vector<double> out;
                for (const auto &e : *v)
                {
                    if (allow_inf)
                        out.push_back(extended_value(e, key));
                    else if (e.is_number())
                        out.push_back(e.get<double>());
                    else
                        throw ConfigError(where(key) + "expected a list of numbers");
                }
                return out;
            }

            // A scalar broadcast to count entries, or a list of exactly count entries.
            std::optional<std::vector<double>> per_user(const std::string &key, int count)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                if (v->is_number())
                    return std::vector<double>(count, v->get<double>());
                auto list = numbers(key);
                if (static_cast<int>(list->size()) != count)
                    throw ConfigError(where(key) + "expected " + std::to_string(count) + " entries");
                return list;
            }

            std::optional<Section> section(const std::string &key)
            {
                const json *v = get(key);
                if (!v)
                    return std::nullopt;
                return Section(*v, path_.empty() ? key : path_ + "." + key);
            }

            void finish() const
            {
                for (auto it = j_.begin(); it != j_.end(); ++it)
                    if (!seen_.count(it.key()))
                        throw ConfigError(where(it.key()) + "unknown key");
            }

            std::string where(const std::string &key = "") const
            {
                std::string p = path_;
                if (!key.empty())
                    p = p.empty() ? key : p + "." + key;
                return p.empty() ? "" : p + ": ";
            }

        private:
            double extended_value(const json &e, const std::string &key) const
            {
                if (e.is_number())
                    return e.get<double>();
                if (e.is_string() && e.get<std::string>() == "inf")
                    return kInf;
                throw ConfigError(where(key) + "expected a number or \"inf\"");
            }

            const json &j_;
            std::string path_;
            std::set<std::string> seen_;
        };

        double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
        double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) / 1000.0; }

        int users_of(const ScenarioSpec &s)
        {
            switch (s.kind)
            {
            case ScenarioKind::specific_two_user:
                return 2;
            case ScenarioKind::specific_three_user:
                return 3;
            default:
                return s.num_users;
            }
        }

        bool ee_experiment(const ExperimentConfig &c)
        {
            return c.experiment == ExperimentKind::ee_vs_multicast_threshold ||
                   c.experiment == ExperimentKind::ee_vs_dynamic_power ||
                   (c.experiment == ExperimentKind::convergence_trace && c.objective == Objective::ee);
        }

        bool single_snr(ExperimentKind k)
        {
            return k == ExperimentKind::rate_region || k == ExperimentKind::ee_vs_multicast_threshold ||
                   k == ExperimentKind::ee_vs_dynamic_power || k == ExperimentKind::scheduling_compare;
        }

        ScenarioSpec pool_spec(const ExperimentConfig &c)
        {
            ScenarioSpec p = c.scenario;
            p.num_users = c.pool_size;
            p.csit = CsitSpec{};
            return p;
        }

        std::vector<double> table_snrs()
        {
            return {0, 5, 10, 15, 20, 25, 30};
        }

        void validate(const ExperimentConfig &c)
        {
            auto wrap = [](const char *what, auto &&fn)
            {
                try
                {
                    fn();
                }
                catch (const std::invalid_argument &e)
                {
                    throw ConfigError(std::string(what) + ": " + e.what());
                }
            };
            const int K = users_of(c.scenario);
            if (c.scenario.num_users != K)
                throw ConfigError("scenario: users does not match the scenario kind");
            if (c.experiment == ExperimentKind::scheduling_compare)
            {
                if (c.scenario.kind != ScenarioKind::random_gaussian)
                    throw ConfigError("scheduling_compare needs a random_gaussian scenario");
                if (c.pool_size < K)
                    throw ConfigError("scheduling: pool must hold at least users candidates");
                wrap("scenario", [&] { pool_spec(c).validate(); });
                if (c.taus.empty())
                    throw ConfigError("scheduling: taus must not be empty");
                for (double t : c.taus)
                    if (!(t >= 0))
                        throw ConfigError("scheduling: taus must be nonnegative");
                if (!c.scenario.csit.scale.empty() && static_cast<int>(c.scenario.csit.scale.size()) != K)
                    throw ConfigError("scenario.csit: scale needs one entry per selected user");
                if (c.scenario.csit.samples < 1)
                    throw ConfigError("scenario.csit: samples must be positive");
            }
            else
                wrap("scenario", [&] { c.scenario.validate(); });
            if ((c.experiment == ExperimentKind::rate_region || c.individual_ee) && K != 2)
                throw ConfigError("weight-grid experiments need two users");
            if (ee_experiment(c) && !c.scenario.csit.perfect)
                throw ConfigError("energy-efficiency experiments run under perfect CSIT only");
            if (c.strategies.empty())
                throw ConfigError("strategies must not be empty");
            if (std::set<StrategyKind>(c.strategies.begin(), c.strategies.end()).size() != c.strategies.size())
                throw ConfigError("strategies must not repeat");
            if (c.snr_db.empty())
                throw ConfigError("snr_db must not be empty");
            if (single_snr(c.experiment) && c.snr_db.size() != 1)
                throw ConfigError("snr_db must hold exactly one value for " + to_string(c.experiment));
            for (double s : c.snr_db)
                if (!std::isfinite(s))
                    throw ConfigError("snr_db must be finite");
            if (!c.threshold_table.empty())
            {
                if (c.threshold_table.size() != c.snr_db.size())
                    throw ConfigError("threshold_table must align with snr_db");
                for (double r : c.threshold_table)
                    if (!(r >= 0))
                        throw ConfigError("threshold_table entries must be nonnegative");
            }
            wrap("qos", [&] { c.qos.validate(K); });
            wrap("weights", [&] { c.weights.validate(K); });
            const double n = 2.0 / c.weight_step;
            if (!(c.weight_step > 0) || std::abs(n - std::round(n)) > 1e-9 || n > 2000)
                throw ConfigError("weight_step must divide 2 into at most 2000 steps");
            if (c.experiment == ExperimentKind::ee_vs_multicast_threshold && !c.individual_ee)
            {
                if (c.multicast_thresholds.empty())
                    throw ConfigError("ee: multicast_thresholds must not be empty");
                for (double r : c.multicast_thresholds)
                    if (!(r >= 0))
                        throw ConfigError("ee: multicast_thresholds must be nonnegative");
            }
            if (c.experiment == ExperimentKind::ee_vs_dynamic_power && c.dynamic_power_dbm.empty())
                throw ConfigError("ee: dynamic_power_dbm must not be empty");
            if (c.individual_ee && c.experiment != ExperimentKind::ee_vs_multicast_threshold)
                throw ConfigError("ee: individual_region applies to ee_vs_multicast_threshold only");
            if (!(c.amplifier_efficiency > 0 && c.amplifier_efficiency <= 1))
                throw ConfigError("power: eta must lie in (0, 1]");
            if (!std::isfinite(c.static_power_dbm) || !std::isfinite(c.dynamic_power_dbm_default))
                throw ConfigError("power: dBm values must be finite");
            wrap("algorithm", [&] { c.algorithm.validate(); });
            if (c.realizations < 1)
                throw ConfigError("realizations must be positive");
            if (c.output.empty())
                throw ConfigError("output must not be empty");
        }

        void apply_defaults(ExperimentConfig &c, const std::set<std::string> &given)
        {
            const int K = users_of(c.scenario);
            c.scenario.num_users = K;
            auto missing = [&](const char *k) { return !given.count(k); };
            if (missing("strategies"))
                c.strategies = c.experiment == ExperimentKind::scheduling_compare
                                   ? std::vector<StrategyKind>{StrategyKind::MU_LP, StrategyKind::ONE_LAYER_RS,
                                                               StrategyKind::GENERALIZED_RS}
                                   : kAllStrategies;
            if (missing("snr_db"))
            {
                switch (c.experiment)
                {
                case ExperimentKind::wsr_vs_snr:
                    c.snr_db = table_snrs();
                    break;
                case ExperimentKind::ee_vs_multicast_threshold:
                case ExperimentKind::ee_vs_dynamic_power:
                    c.snr_db = {10};
                    break;
                default:
                    c.snr_db = {20};
                }
            }
            if (missing("threshold_table") && missing("qos") &&
                (c.experiment == ExperimentKind::wsr_vs_snr || c.experiment == ExperimentKind::convergence_trace))
            {
                const auto snrs = table_snrs();
                const auto table = default_threshold_table();
                for (double s : c.snr_db)
                {
                    auto it = std::find(snrs.begin(), snrs.end(), s);
                    if (it == snrs.end())
                        throw ConfigError("snr_db " + std::to_string(s) +
                                          " has no default threshold; give threshold_table or qos");
                    c.threshold_table.push_back(table[it - snrs.begin()]);
                }
            }
            if (missing("qos"))
            {
                switch (c.experiment)
                {
                case ExperimentKind::rate_region:
                    c.qos = QosSpec::uniform(K, 0.0);
                    c.qos.multicast_threshold = 0.5;
                    break;
                case ExperimentKind::ee_vs_multicast_threshold:
                    c.qos = QosSpec::uniform(K, 0.5);
                    c.qos.multicast_threshold = 0.5;
                    break;
                case ExperimentKind::ee_vs_dynamic_power:
                    c.qos = QosSpec::uniform(K, 0.1);
                    c.qos.multicast_threshold = 0.1;
                    break;
                case ExperimentKind::scheduling_compare:
                    c.qos = QosSpec::uniform(K, 0.2);
                    c.qos.multicast_threshold = 0.2;
                    break;
                default:
                    c.qos = QosSpec::uniform(K, 0.0);
                }
            }
            if (missing("weights"))
                c.weights = WeightVector::unit(K, 1.0);
            if (missing("multicast_thresholds"))
                for (int i = 0; i < 8; ++i)
                    c.multicast_thresholds.push_back(0.1 + 0.2 * i);
            if (missing("dynamic_power_dbm"))
                for (int i = 0; i <= 7; ++i)
                    c.dynamic_power_dbm.push_back(20.0 + 2.0 * i);
            if (missing("taus"))
                c.taus = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
        }

        std::string fmt(double v)
        {
            if (std::isnan(v))
                return "nan";
            if (std::isinf(v))
                return v > 0 ? "inf" : "-inf";
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::string csv_field(const std::string &s)
        {
            if (s.find_first_of(",\"\n") == std::string::npos)
                return s;
            std::string out = "\"";
            for (char ch : s)
                out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
            return out + "\"";
        }

        template <class T, class F>
        std::string joined(const std::vector<T> &v, F &&f)
        {
            std::string out;
            for (std::size_t i = 0; i < v.size(); ++i)
                out += (i ? ";" : "") + f(v[i]);
            return out;
        }

        // Channel realization of one task.
        struct Realization
        {
            std::uint64_t seed = 0;
            ScenarioSpec spec;
            ChannelSet channel;
        };

        Realization realize(const ExperimentConfig &c, int r)
        {
            Realization out;
            out.spec = c.scenario;
            if (c.scenario.kind == ScenarioKind::random_gaussian)
            {
                out.seed = derive_seed(c.seed, {static_cast<std::uint64_t>(r)});
                out.spec.seed = out.seed;
                if (c.experiment == ExperimentKind::scheduling_compare)
                {
                    ScenarioSpec p = pool_spec(c);
                    p.seed = out.seed;
                    out.channel = random_channels(p);
                }
                else
                    out.channel = random_channels(out.spec);
            }
            else
            {
                out.seed = c.seed;
                out.spec.seed = c.seed;
                out.channel = specific_channels(out.spec);
            }
            return out;
        }

        SystemConfig system_at(const ExperimentConfig &c, int K, double snr_db)
        {
            SystemConfig sys;
            sys.num_tx_antennas = c.scenario.num_tx_antennas;
            sys.num_users = K;
            sys.power_budget = db_to_linear(snr_db);
            return sys;
        }

        PowerModel power_at(const ExperimentConfig &c, double dynamic_dbm)
        {
            PowerModel pm;
            pm.amplifier_efficiency = c.amplifier_efficiency;
            pm.dynamic_power_per_chain = dbm_to_watts(dynamic_dbm);
            pm.static_power = dbm_to_watts(c.static_power_dbm);
            return pm;
        }

        AlgorithmConfig algorithm_of(const ExperimentConfig &c, std::uint64_t seed)
        {
            AlgorithmConfig a = c.algorithm;
            a.csit_sample_count = c.scenario.csit.samples;
            a.rng_seed = seed;
            return a;
        }

        ChannelSet with_csit(const CMat &estimate, const CsitSpec &csit, double tau, double power_budget,
                             std::uint64_t seed)
        {
            if (std::isinf(tau))
            {
                ChannelSet c;
                c.estimated = estimate;
                return c;
            }
            return csit_samples(estimate, tau, power_budget, csit.scale, csit.samples, seed);
        }

        struct TaskOutput
        {
            std::vector<ResultRow> rows;
            std::vector<TraceRow> trace;
        };

        ResultRow base_row(int point, int realization, const Realization &re)
        {
            ResultRow row;
            row.point = point;
            row.realization = realization;
            row.seed = re.seed;
            row.scenario_hash = hash_hex(re.spec.canonical());
            for (int k = 0; k < re.spec.num_users; ++k)
                row.users.push_back(k);
            return row;
        }

        void fill(ResultRow &row, const WsrResult &r)
        {
            row.strategy = to_string(r.strategy.kind);
            row.order = r.strategy.label();
            row.origin = r.origin;
            row.status = to_string(r.status);
            row.iterations = r.iterations;
            row.feasible = r.feasible();
            row.time_sharing = r.strategy.kind == StrategyKind::OMA;
            if (!row.feasible)
            {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                row.wsr = row.ee = row.total_power = row.multicast_rate = nan;
                return;
            }
            row.wsr = r.report.wsr;
            row.ee = r.report.ee;
            row.total_power = r.report.total_power;
            row.multicast_rate = r.allocation.multicast_portion;
            row.user_rates = r.report.user_totals;
        }

        void fill(ResultRow &row, const EeResult &r)
        {
            row.strategy = to_string(r.strategy.kind);
            row.order = r.strategy.label();
            row.origin = r.origin;
            row.status = to_string(r.status);
            row.iterations = r.iterations;
            row.feasible = r.feasible();
            row.time_sharing = r.strategy.kind == StrategyKind::OMA;
            if (!row.feasible)
            {
                const double nan = std::numeric_limits<double>::quiet_NaN();
                row.wsr = row.ee = row.total_power = row.multicast_rate = nan;
                return;
            }
            row.wsr = r.report.wsr;
            row.ee = r.report.ee;
            row.total_power = r.report.total_power;
            row.multicast_rate = r.allocation.multicast_portion;
            row.user_rates = r.report.user_totals;
        }

        WsrInstance wsr_instance(const ExperimentConfig &c, ChannelSet channel, double snr_db, const QosSpec &qos,
                                 const WeightVector &w)
        {
            WsrInstance inst;
            inst.sys = system_at(c, channel.num_users(), snr_db);
            inst.channel = std::move(channel);
            inst.weights = w;
            inst.qos = qos;
            inst.power_model = power_at(c, c.dynamic_power_dbm_default);
            return inst;
        }

        // Estimate or CSIT samples of one realization at one SNR.
        ChannelSet channel_at(const ExperimentConfig &c, const Realization &re, double snr_db, int snr_index)
        {
            if (c.scenario.csit.perfect)
            {
                ChannelSet ch;
                ch.estimated = re.channel.estimated;
                return ch;
            }
            return with_csit(re.channel.estimated, c.scenario.csit, c.scenario.csit.tau, db_to_linear(snr_db),
                             derive_seed(re.seed, {static_cast<std::uint64_t>(snr_index)}));
        }

        // every_oma_target: one OMA row per served user instead of the best one.
        void wsr_rows(TaskOutput &out, const ResultRow &base, const ExperimentConfig &c,
                      const std::vector<StrategyKind> &kinds, const WsrInstance &inst, bool every_oma_target = false)
        {
            auto solved = solve_wsr_strategies(kinds, inst, algorithm_of(c, base.seed));
            for (StrategyKind k : kinds)
            {
                if (every_oma_target && k == StrategyKind::OMA)
                {
                    for (const WsrResult &r : solved.at(k).runs)
                    {
                        ResultRow row = base;
                        fill(row, r);
                        row.wall_seconds = solved.at(k).wall_seconds;
                        out.rows.push_back(std::move(row));
                    }
                    continue;
                }
                ResultRow row = base;
                fill(row, solved.at(k).best);
                row.wall_seconds = solved.at(k).wall_seconds;
                out.rows.push_back(std::move(row));
            }
        }

        void ee_rows(TaskOutput &out, const ResultRow &base, const ExperimentConfig &c, const EeInstance &inst)
        {
            auto solved = solve_ee_strategies(c.strategies, inst, algorithm_of(c, base.seed));
            for (StrategyKind k : c.strategies)
            {
                ResultRow row = base;
                fill(row, solved.at(k).best);
                row.wall_seconds = solved.at(k).wall_seconds;
                out.rows.push_back(std::move(row));
            }
        }

        QosSpec qos_at(const ExperimentConfig &c, int snr_index)
        {
            if (c.threshold_table.empty())
                return c.qos;
            QosSpec q = QosSpec::uniform(c.scenario.num_users, c.threshold_table[snr_index]);
            q.multicast_threshold = c.threshold_table[snr_index];
            return q;
        }

        WeightVector weights_at(const ExperimentConfig &c, double u2)
        {
            WeightVector w = c.weights;
            w.unicast_weights[1] = u2;
            return w;
        }

        EeInstance ee_instance(const ExperimentConfig &c, const Realization &re, double snr_db, double dynamic_dbm)
        {
            EeInstance inst;
            inst.H = re.channel.estimated;
            inst.sys = system_at(c, static_cast<int>(inst.H.cols()), snr_db);
            inst.weights = c.weights;
            inst.qos = c.qos;
            inst.power_model = power_at(c, dynamic_dbm);
            return inst;
        }

        struct Task
        {
            int point = 0;
            int realization = 0;
            std::function<TaskOutput(const Realization &)> run;
        };

        std::vector<double> point_values(const ExperimentConfig &c, std::string &sweep)
        {
            switch (c.experiment)
            {
            case ExperimentKind::rate_region:
            {
                sweep = "u2";
                std::vector<double> v;
                for (double x : weight_grid_exponents(c.weight_step))
                    v.push_back(std::pow(10.0, x));
                return v;
            }
            case ExperimentKind::wsr_vs_snr:
            case ExperimentKind::convergence_trace:
                sweep = "snr_db";
                return c.snr_db;
            case ExperimentKind::ee_vs_multicast_threshold:
                if (c.individual_ee)
                {
                    sweep = "u2";
                    std::vector<double> v;
                    for (double x : weight_grid_exponents(c.weight_step))
                        v.push_back(std::pow(10.0, x));
                    return v;
                }
                sweep = "R0_th";
                return c.multicast_thresholds;
            case ExperimentKind::ee_vs_dynamic_power:
                sweep = "P_dyn_dbm";
                return c.dynamic_power_dbm;
            case ExperimentKind::scheduling_compare:
                sweep = "tau";
                return c.taus;
            }
            return {};
        }

        TaskOutput run_point(const ExperimentConfig &c, const Realization &re, int point, int realization,
                             const std::string &sweep, double value)
        {
            TaskOutput out;
            ResultRow base = base_row(point, realization, re);
            base.sweep = sweep;
            base.sweep_value = value;
            switch (c.experiment)
            {
            case ExperimentKind::rate_region:
            {
                base.snr_db = c.snr_db[0];
                WsrInstance inst = wsr_instance(c, channel_at(c, re, c.snr_db[0], 0), c.snr_db[0], c.qos,
                                                weights_at(c, value));
                wsr_rows(out, base, c, c.strategies, inst, true);
                break;
            }
            case ExperimentKind::wsr_vs_snr:
            {
                base.snr_db = value;
                WsrInstance inst =
                    wsr_instance(c, channel_at(c, re, value, point), value, qos_at(c, point), c.weights);
                wsr_rows(out, base, c, c.strategies, inst);
                break;
            }
            case ExperimentKind::ee_vs_multicast_threshold:
            {
                base.snr_db = c.snr_db[0];
                EeInstance inst = ee_instance(c, re, c.snr_db[0], c.dynamic_power_dbm_default);
                if (c.individual_ee)
                {
                    inst.weights = weights_at(c, value);
                    inst.fix_multicast_portion = true;
                }
                else
                    inst.qos.multicast_threshold = value;
                ee_rows(out, base, c, inst);
                break;
            }
            case ExperimentKind::ee_vs_dynamic_power:
            {
                base.snr_db = c.snr_db[0];
                ee_rows(out, base, c, ee_instance(c, re, c.snr_db[0], value));
                break;
            }
            case ExperimentKind::convergence_trace:
            {
                base.snr_db = value;
                auto emit = [&](const auto &runs, double wall)
                {
                    for (const auto &r : runs)
                    {
                        ResultRow row = base;
                        fill(row, r);
                        row.wall_seconds = wall;
                        out.rows.push_back(row);
                        for (std::size_t i = 0; i < r.trace.size(); ++i)
                            out.trace.push_back({point, realization, row.strategy, row.order, row.origin,
                                                 static_cast<int>(i), r.trace[i]});
                    }
                };
                if (c.objective == Objective::wsr)
                {
                    WsrInstance inst =
                        wsr_instance(c, channel_at(c, re, value, point), value, qos_at(c, point), c.weights);
                    auto solved = solve_wsr_strategies(c.strategies, inst, algorithm_of(c, base.seed));
                    for (StrategyKind k : c.strategies)
                        emit(solved.at(k).runs, solved.at(k).wall_seconds);
                }
                else
                {
                    EeInstance inst = ee_instance(c, re, value, c.dynamic_power_dbm_default);
                    inst.qos = qos_at(c, point);
                    auto solved = solve_ee_strategies(c.strategies, inst, algorithm_of(c, base.seed));
                    for (StrategyKind k : c.strategies)
                        emit(solved.at(k).runs, solved.at(k).wall_seconds);
                }
                break;
            }
            case ExperimentKind::scheduling_compare:
            {
                base.snr_db = c.snr_db[0];
                const double pt = db_to_linear(c.snr_db[0]);
                const int K = c.scenario.num_users;
                struct Group
                {
                    ScheduleMethod method;
                    std::vector<StrategyKind> kinds;
                };
                std::vector<Group> groups;
                auto add = [&](ScheduleMethod m, StrategyKind k)
                {
                    for (auto &g : groups)
                        if (g.method == m)
                        {
                            g.kinds.push_back(k);
                            return;
                        }
                    groups.push_back({m, {k}});
                };
                for (StrategyKind k : c.strategies)
                    add(k == StrategyKind::MU_LP ? ScheduleMethod::correlation : ScheduleMethod::best_strength, k);
                for (StrategyKind k : c.strategies)
                    add(ScheduleMethod::none, k);
                for (const Group &g : groups)
                {
                    std::vector<int> users = schedule_users(re.channel.estimated, K, g.method, re.seed);
                    CMat H(re.channel.estimated.rows(), K);
                    for (int k = 0; k < K; ++k)
                        H.col(k) = re.channel.estimated.col(users[k]);
                    ChannelSet ch = with_csit(H, c.scenario.csit, value, pt,
                                              derive_seed(re.seed, {static_cast<std::uint64_t>(point)}));
                    ResultRow gbase = base;
                    gbase.users = users;
                    gbase.scheduler = to_string(g.method);
                    wsr_rows(out, gbase, c, g.kinds, wsr_instance(c, std::move(ch), c.snr_db[0], c.qos, c.weights));
                }
                break;
            }
            }
            return out;
        }

        ordered_json to_json(const ExperimentConfig &c)
        {
            auto ext = [](double v) -> ordered_json
            {
                if (std::isinf(v))
                    return "inf";
                return v;
            };
            ordered_json j;
            j["experiment"] = to_string(c.experiment);
            j["seed"] = c.seed;
            ordered_json s;
            s["kind"] = to_string(c.scenario.kind);
            s["nt"] = c.scenario.num_tx_antennas;
            s["users"] = c.scenario.num_users;
            if (c.scenario.kind == ScenarioKind::random_gaussian)
                s["variances"] = c.scenario.variances;
            else
            {
                s["gamma"] = c.scenario.gamma;
                s["theta"] = c.scenario.theta;
                if (c.scenario.kind == ScenarioKind::specific_three_user)
                {
                    s["gamma2"] = c.scenario.gamma2;
                    s["theta2"] = c.scenario.theta2;
                }
            }
            ordered_json cs;
            cs["perfect"] = c.scenario.csit.perfect;
            cs["tau"] = ext(c.scenario.csit.tau);
            cs["samples"] = c.scenario.csit.samples;
            cs["scale"] = c.scenario.csit.scale;
            s["csit"] = cs;
            j["scenario"] = s;
            std::vector<std::string> names;
            for (StrategyKind k : c.strategies)
                names.push_back(to_string(k));
            j["strategies"] = names;
            j["snr_db"] = c.snr_db;
            j["threshold_table"] = c.threshold_table;
            j["qos"] = {{"unicast", c.qos.unicast_thresholds}, {"multicast", c.qos.multicast_threshold}};
            j["weights"] = {{"unicast", c.weights.unicast_weights}, {"multicast", c.weights.multicast_weight}};
            j["weight_step"] = c.weight_step;
            ordered_json ee;
            ee["individual_region"] = c.individual_ee;
            ee["multicast_thresholds"] = c.multicast_thresholds;
            ee["dynamic_power_dbm"] = c.dynamic_power_dbm;
            j["ee"] = ee;
            j["objective"] = c.objective == Objective::wsr ? "wsr" : "ee";
            ordered_json pw;
            pw["eta"] = c.amplifier_efficiency;
            pw["static_dbm"] = c.static_power_dbm;
            pw["dynamic_dbm"] = c.dynamic_power_dbm_default;
            j["power"] = pw;
            ordered_json al;
            al["tolerance"] = c.algorithm.convergence_tolerance;
            al["max_iterations"] = c.algorithm.max_iterations;
            al["solver_tolerance"] = c.algorithm.solver_tolerance;
            j["algorithm"] = al;
            j["realizations"] = c.realizations;
            ordered_json sc;
            sc["pool"] = c.pool_size;
            std::vector<ordered_json> taus;
            for (double t : c.taus)
                taus.push_back(ext(t));
            sc["taus"] = taus;
            j["scheduling"] = sc;
            j["output"] = c.output;
            j["paper_scale"] = c.paper_scale;
            return j;
        }

        void write_file(const std::filesystem::path &p, const std::string &text)
        {
            std::ofstream f(p, std::ios::binary);
            if (!f)
                throw std::runtime_error("cannot write " + p.string());
            f << text;
            if (!f)
                throw std::runtime_error("cannot write " + p.string());
        }
    } // namespace

    std::string to_string(ExperimentKind k)
    {
        switch (k)
        {
        case ExperimentKind::rate_region:
            return "rate_region";
        case ExperimentKind::wsr_vs_snr:
            return "wsr_vs_snr";
        case ExperimentKind::ee_vs_multicast_threshold:
            return "ee_vs_multicast_threshold";
        case ExperimentKind::ee_vs_dynamic_power:
            return "ee_vs_dynamic_power";
        case ExperimentKind::convergence_trace:
            return "convergence_trace";
        case ExperimentKind::scheduling_compare:
            return "scheduling_compare";
        }
        return "unknown";
    }

    ExperimentKind parse_experiment_kind(const std::string &name)
    {
        for (auto k : {ExperimentKind::rate_region, ExperimentKind::wsr_vs_snr, ExperimentKind::ee_vs_multicast_threshold,
                       ExperimentKind::ee_vs_dynamic_power, ExperimentKind::convergence_trace,
                       ExperimentKind::scheduling_compare})
            if (to_string(k) == name)
                return k;
        throw ConfigError("unknown experiment '" + name + "'");
    }

    std::vector<double> weight_grid_exponents(double step)
    {
        const int n = static_cast<int>(std::lround(2.0 / step));
        std::vector<double> x{-3.0};
        for (int i = 0; i <= n; ++i)
            x.push_back((2.0 * i - n) / n);
        x.push_back(3.0);
        return x;
    }

    std::vector<double> default_threshold_table() { return {0.005, 0.01, 0.05, 0.15, 0.3, 0.4, 0.4}; }

    ExperimentConfig parse_config(const std::string &json_text)
    {
        json doc;
        try
        {
            doc = json::parse(json_text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError(std::string("malformed JSON: ") + e.what());
        }
        Section root(doc, "");
        ExperimentConfig c;
        std::set<std::string> given;
        auto note = [&](const std::string &k, bool present)
        {
            if (present)
                given.insert(k);
        };

        auto experiment = root.string("experiment");
        if (!experiment)
            throw ConfigError("experiment: required");
        c.experiment = parse_experiment_kind(*experiment);
        if (auto v = root.unsigned_integer("seed"))
            c.seed = *v;

        auto scen = root.section("scenario");
        if (!scen)
            throw ConfigError("scenario: required");
        {
            auto kind = scen->string("kind");
            if (!kind)
                throw ConfigError("scenario.kind: required");
            try
            {
                c.scenario.kind = parse_scenario_kind(*kind);
            }
            catch (const std::invalid_argument &e)
            {
                throw ConfigError(std::string("scenario.kind: ") + e.what());
            }
            if (auto v = scen->integer("nt"))
                c.scenario.num_tx_antennas = static_cast<int>(*v);
            const int fixed = users_of(c.scenario);
            c.scenario.num_users = c.scenario.kind == ScenarioKind::random_gaussian ? 2 : fixed;
            if (auto v = scen->integer("users"))
                c.scenario.num_users = static_cast<int>(*v);
            auto angle = [&](const char *rad, const char *deg) -> std::optional<double>
            {
                auto r = scen->number(rad);
                auto d = scen->number(deg);
                if (r && d)
                    throw ConfigError(scen->where(rad) + "give either " + rad + " or " + deg);
                if (d)
                    return *d * std::numbers::pi / 180.0;
                return r;
            };
            const bool specific = c.scenario.kind != ScenarioKind::random_gaussian;
            if (auto v = scen->number("gamma"))
                c.scenario.gamma = *v;
            if (auto v = scen->number("gamma2"))
                c.scenario.gamma2 = *v;
            auto theta = angle("theta", "theta_deg");
            if (specific && !theta)
                throw ConfigError("scenario.theta: required for specific scenarios");
            if (theta)
                c.scenario.theta = *theta;
            if (auto v = angle("theta2", "theta2_deg"))
                c.scenario.theta2 = *v;
            if (auto v = scen->numbers("variances"))
                c.scenario.variances = *v;
            else if (!specific)
                throw ConfigError("scenario.variances: required for random_gaussian");
            if (auto cs = scen->section("csit"))
            {
                if (auto v = cs->boolean("perfect"))
                    c.scenario.csit.perfect = *v;
                else
                    c.scenario.csit.perfect = false;
                if (auto v = cs->extended("tau"))
                    c.scenario.csit.tau = *v;
                if (auto v = cs->integer("samples"))
                    c.scenario.csit.samples = static_cast<int>(*v);
                if (auto v = cs->numbers("scale"))
                    c.scenario.csit.scale = *v;
                cs->finish();
            }
            scen->finish();
        }

        if (auto v = root.get("strategies"))
        {
            note("strategies", true);
            if (!v->is_array())
                throw ConfigError("strategies: expected a list");
            for (const auto &e : *v)
            {
                if (!e.is_string())
                    throw ConfigError("strategies: expected strategy names");
                try
                {
                    c.strategies.push_back(parse_strategy_kind(e.get<std::string>()));
                }
                catch (const std::invalid_argument &ex)
                {
                    throw ConfigError(std::string("strategies: ") + ex.what());
                }
            }
        }
        const int K = users_of(c.scenario);
        if (auto v = root.numbers("snr_db"))
        {
            note("snr_db", true);
            c.snr_db = *v;
        }
        if (auto v = root.numbers("threshold_table"))
        {
            note("threshold_table", true);
            c.threshold_table = *v;
        }
        if (auto q = root.section("qos"))
        {
            note("qos", true);
            c.qos = QosSpec::uniform(K, 0.0);
            if (auto v = q->per_user("unicast", K))
                c.qos.unicast_thresholds = *v;
            if (auto v = q->number("multicast"))
                c.qos.multicast_threshold = *v;
            q->finish();
        }
        if (auto w = root.section("weights"))
        {
            note("weights", true);
            c.weights = WeightVector::unit(K, 1.0);
            if (auto v = w->per_user("unicast", K))
                c.weights.unicast_weights = *v;
            if (auto v = w->number("multicast"))
                c.weights.multicast_weight = *v;
            w->finish();
        }
        if (auto v = root.number("weight_step"))
            c.weight_step = *v;
        if (auto ee = root.section("ee"))
        {
            if (auto v = ee->boolean("individual_region"))
                c.individual_ee = *v;
            if (auto v = ee->numbers("multicast_thresholds"))
            {
                note("multicast_thresholds", true);
                c.multicast_thresholds = *v;
            }
            if (auto v = ee->numbers("dynamic_power_dbm"))
            {
                note("dynamic_power_dbm", true);
                c.dynamic_power_dbm = *v;
            }
            ee->finish();
        }
        if (auto v = root.string("objective"))
        {
            if (*v == "wsr")
                c.objective = Objective::wsr;
            else if (*v == "ee")
                c.objective = Objective::ee;
            else
                throw ConfigError("objective: expected \"wsr\" or \"ee\"");
        }
        if (auto p = root.section("power"))
        {
            if (auto v = p->number("eta"))
                c.amplifier_efficiency = *v;
            if (auto v = p->number("static_dbm"))
                c.static_power_dbm = *v;
            if (auto v = p->number("dynamic_dbm"))
                c.dynamic_power_dbm_default = *v;
            p->finish();
        }
        if (auto a = root.section("algorithm"))
        {
            if (auto v = a->number("tolerance"))
                c.algorithm.convergence_tolerance = *v;
            if (auto v = a->integer("max_iterations"))
                c.algorithm.max_iterations = static_cast<int>(*v);
            if (auto v = a->number("solver_tolerance"))
                c.algorithm.solver_tolerance = *v;
            a->finish();
        }
        if (auto v = root.integer("realizations"))
            c.realizations = static_cast<int>(*v);
        if (auto s = root.section("scheduling"))
        {
            if (auto v = s->integer("pool"))
                c.pool_size = static_cast<int>(*v);
            if (auto v = s->numbers("taus", true))
            {
                note("taus", true);
                c.taus = *v;
            }
            s->finish();
        }
        if (auto v = root.string("output"))
            c.output = *v;
        if (auto v = root.boolean("paper_scale"))
            c.paper_scale = *v;
        root.finish();

        if (c.scenario.kind != ScenarioKind::random_gaussian)
            c.realizations = 1;
        apply_defaults(c, given);
        validate(c);
        return c;
    }

    ExperimentConfig load_config(const std::string &path)
    {
        std::ifstream f(path, std::ios::binary);
        if (!f)
            throw ConfigError("cannot read " + path);
        std::stringstream ss;
        ss << f.rdbuf();
        return parse_config(ss.str());
    }

    ExperimentConfig effective_config(ExperimentConfig cfg, const RunOptions &opt)
    {
        if (opt.seed)
            cfg.seed = *opt.seed;
        if (opt.strategies)
            cfg.strategies = *opt.strategies;
        if (opt.out_dir)
            cfg.output = *opt.out_dir;
        if (opt.paper_scale)
            cfg.paper_scale = true;
        if (cfg.paper_scale)
        {
            if (cfg.scenario.kind == ScenarioKind::random_gaussian)
                cfg.realizations = std::max(cfg.realizations, 100);
            cfg.scenario.csit.samples = std::max(cfg.scenario.csit.samples, 1000);
        }
        if (opt.jobs < 1)
            throw ConfigError("jobs must be positive");
        validate(cfg);
        return cfg;
    }

    ExperimentResult run_experiment(const ExperimentConfig &cfg, int jobs, bool strict)
    {
        validate(cfg);
        std::string sweep;
        const std::vector<double> values = point_values(cfg, sweep);

        std::vector<Task> tasks;
        for (int p = 0; p < static_cast<int>(values.size()); ++p)
            for (int r = 0; r < cfg.realizations; ++r)
                tasks.push_back({p, r, [&cfg, &sweep, v = values[p], p, r](const Realization &re)
                                 { return run_point(cfg, re, p, r, sweep, v); }});

        std::vector<TaskOutput> outputs(tasks.size());
        std::atomic<std::size_t> next{0};
        std::atomic<bool> stop{false};
        std::exception_ptr error;
        std::mutex error_mutex;
        auto worker = [&]
        {
            for (;;)
            {
                const std::size_t i = next++;
                if (i >= tasks.size() || stop)
                    return;
                try
                {
                    outputs[i] = tasks[i].run(realize(cfg, tasks[i].realization));
                    if (strict)
                        for (const auto &row : outputs[i].rows)
                            if (!row.feasible)
                                stop = true;
                }
                catch (...)
                {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    stop = true;
                }
            }
        };
        {
            std::vector<std::jthread> pool;
            for (int j = 1; j < std::max(1, jobs); ++j)
                pool.emplace_back(worker);
            worker();
        }
        if (error)
            std::rethrow_exception(error);

        ExperimentResult res;
        for (auto &o : outputs)
        {
            for (auto &row : o.rows)
            {
                if (!row.feasible)
                {
                    ++res.infeasible;
                    if (strict)
                        throw InfeasibleAbort("infeasible instance: " + to_string(cfg.experiment) + " point " +
                                              std::to_string(row.point) + " realization " +
                                              std::to_string(row.realization) + " strategy " + row.strategy);
                }
                res.rows.push_back(std::move(row));
            }
            for (auto &t : o.trace)
                res.trace.push_back(std::move(t));
        }
        return res;
    }

    std::string csv_header()
    {
        return "experiment,point,realization,sweep,sweep_value,snr_db,seed,scenario_hash,users,scheduler,strategy,"
               "order,origin,status,iterations,wsr,ee,total_power,multicast_rate,user_rates,time_sharing";
    }

    std::string to_csv(const ExperimentResult &res, const ExperimentConfig &cfg)
    {
        std::string out = csv_header() + "\n";
        const std::string exp = to_string(cfg.experiment);
        for (const auto &r : res.rows)
        {
            std::vector<std::string> f = {
                exp,
                std::to_string(r.point),
                std::to_string(r.realization),
                r.sweep,
                fmt(r.sweep_value),
                fmt(r.snr_db),
                std::to_string(r.seed),
                r.scenario_hash,
                joined(r.users, [](int u) { return std::to_string(u + 1); }),
                r.scheduler,
                r.strategy,
                r.order,
                r.origin,
                r.status,
                std::to_string(r.iterations),
                fmt(r.wsr),
                fmt(r.ee),
                fmt(r.total_power),
                fmt(r.multicast_rate),
                joined(r.user_rates, [](double v) { return fmt(v); }),
                r.time_sharing ? "1" : "0"};
            for (std::size_t i = 0; i < f.size(); ++i)
                out += (i ? "," : "") + csv_field(f[i]);
            out += "\n";
        }
        return out;
    }

    std::string timing_csv(const ExperimentResult &res)
    {
        std::string out = "point,realization,scheduler,strategy,order,origin,wall_time_s\n";
        for (const auto &r : res.rows)
            out += std::to_string(r.point) + "," + std::to_string(r.realization) + "," + csv_field(r.scheduler) +
                   "," + csv_field(r.strategy) + "," + csv_field(r.order) + "," + csv_field(r.origin) + "," +
                   fmt(r.wall_seconds) + "\n";
        return out;
    }

    std::string trace_csv(const ExperimentResult &res)
    {
        std::string out = "point,realization,strategy,order,origin,iteration,objective\n";
        for (const auto &t : res.trace)
            out += std::to_string(t.point) + "," + std::to_string(t.realization) + "," + csv_field(t.strategy) +
                   "," + csv_field(t.order) + "," + csv_field(t.origin) + "," + std::to_string(t.iteration) + "," +
                   fmt(t.objective) + "\n";
        return out;
    }

    std::string hash_hex(const std::string &text)
    {
        std::uint64_t h = 14695981039346656037ull;
        for (unsigned char ch : text)
        {
            h ^= ch;
            h *= 1099511628211ull;
        }
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
        return buf;
    }

    std::string config_json(const ExperimentConfig &cfg) { return to_json(cfg).dump(); }

    std::string write_outputs(const ExperimentResult &res, const ExperimentConfig &cfg, const std::string &out_dir,
                              int jobs)
    {
        namespace fs = std::filesystem;
        const fs::path dir(out_dir);
        fs::create_directories(dir);
        const std::string stem = to_string(cfg.experiment);
        const fs::path csv = dir / (stem + ".csv");
        write_file(csv, to_csv(res, cfg));
        write_file(dir / (stem + ".timing.csv"), timing_csv(res));
        if (cfg.experiment == ExperimentKind::convergence_trace)
            write_file(dir / (stem + ".trace.csv"), trace_csv(res));

        ordered_json meta;
        meta["toolkit"] = "noum";
        meta["version"] = NOUM_VERSION;
        meta["experiment"] = stem;
        const std::string text = config_json(cfg);
        meta["config_hash"] = hash_hex(text);
        meta["seed"] = cfg.seed;
        meta["paper_scale"] = cfg.paper_scale;
        meta["realizations"] = cfg.realizations;
        meta["csit_samples"] = cfg.scenario.csit.samples;
        meta["jobs"] = jobs;
        meta["rows"] = res.rows.size();
        meta["infeasible_rows"] = res.infeasible;
        meta["columns"] = csv_header();
        meta["config"] = ordered_json::parse(text);
        write_file(dir / (stem + ".meta.json"), meta.dump(2) + "\n");
        return csv.string();
    }

} // namespace noum
