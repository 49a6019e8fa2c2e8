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

#include "noum/model.hpp"
#include "noum/rates.hpp"
#include "noum/scenarios.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>

using namespace noum;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace
{
    const StrategyKind kFive[] = {StrategyKind::MU_LP, StrategyKind::ONE_LAYER_RS, StrategyKind::GENERALIZED_RS,
                                  StrategyKind::SC_SIC, StrategyKind::SC_SIC_PER_GROUP};

    PrecoderSet with_power(int Nt, int S, double power)
    {
        PrecoderSet P = PrecoderSet::zeros(Nt, S);
        P.columns(0, 0) = std::sqrt(power);
        return P;
    }
} // namespace

TEST_CASE("total power with zero transmit power is the circuit power", "[model][power]")
{
    PowerModel pm;
    pm.amplifier_efficiency = 0.35;
    pm.dynamic_power_per_chain = std::pow(10.0, 2.7) / 1000.0;
    pm.static_power = std::pow(10.0, 3.0) / 1000.0;
    const double expected = 4 * 0.501187233627272 + 1.0;
    REQUIRE_THAT(total_power(PrecoderSet::zeros(4, 3), pm, test::system(2, 4, 10)), WithinAbs(expected, 1e-12));
    REQUIRE_THAT(total_power(PrecoderSet::zeros(4, 3), pm, test::system(2, 4, 10)), WithinAbs(3.0048, 1e-4));
}

TEST_CASE("total power with unit efficiency and no circuit power is the transmit power", "[model][power]")
{
    PowerModel pm;
    pm.amplifier_efficiency = 1.0;
    REQUIRE_THAT(total_power(with_power(3, 2, 5.0), pm, test::system(2, 3, 10)), WithinAbs(5.0, 1e-12));
}

TEST_CASE("total power hand evaluation", "[model][power]")
{
    PowerModel pm;
    pm.amplifier_efficiency = 0.5;
    pm.dynamic_power_per_chain = 1.0;
    pm.static_power = 2.0;
    REQUIRE_THAT(total_power(with_power(2, 3, 3.0), pm, test::system(2, 2, 10)), WithinAbs(10.0, 1e-12));
}

TEST_CASE("power model and system config reject invalid values", "[model]")
{
    PowerModel pm;
    pm.amplifier_efficiency = 0.0;
    REQUIRE_THROWS_AS(pm.validate(), std::invalid_argument);
    SystemConfig sys = test::system(0, 2, 1);
    REQUIRE_THROWS_AS(sys.validate(), std::invalid_argument);
    sys = test::system(2, 2, 1);
    sys.noise_variance = {1.0, 0.0};
    REQUIRE_THROWS_AS(sys.validate(), std::invalid_argument);
}

TEST_CASE("generalized RS chain of user 1 follows the pair order", "[model][layout]")
{
    StrategyConfig sc;
    sc.kind = StrategyKind::GENERALIZED_RS;
    sc.subset_order = {{0, 1}, {0, 2}, {1, 2}};
    StreamLayout L = stream_layout(sc, test::system(3, 4, 10));
    REQUIRE(test::chain_names(L, 0) == std::vector<std::string>{"s0", "s12", "s13", "s1"});
    REQUIRE(test::chain_names(L, 2) == std::vector<std::string>{"s0", "s13", "s23", "s3"});
}

TEST_CASE("MU-LP chain of user 2", "[model][layout]")
{
    StrategyConfig sc;
    sc.kind = StrategyKind::MU_LP;
    StreamLayout L = stream_layout(sc, test::system(2, 2, 10));
    REQUIRE(test::chain_names(L, 1) == std::vector<std::string>{"s0", "s2"});
}

TEST_CASE("SC-SIC chain of the last user cancels earlier users", "[model][layout]")
{
    StrategyConfig sc;
    sc.kind = StrategyKind::SC_SIC;
    sc.decoding_order = {0, 1, 2};
    StreamLayout L = stream_layout(sc, test::system(3, 2, 10));
    REQUIRE(test::chain_names(L, 2) == std::vector<std::string>{"s0", "s2", "s3"});
    REQUIRE(test::chain_names(L, 0) == std::vector<std::string>{"s0"});
}

TEST_CASE("SC-SIC per group keeps groups apart", "[model][layout]")
{
    StrategyConfig sc;
    sc.kind = StrategyKind::SC_SIC_PER_GROUP;
    sc.grouping = {{2, 0}, {1}};
    StreamLayout L = stream_layout(sc, test::system(3, 2, 10));
    REQUIRE(test::chain_names(L, 2) == std::vector<std::string>{"s0", "s3"});
    REQUIRE(test::chain_names(L, 0) == std::vector<std::string>{"s0", "s3", "s1"});
    REQUIRE(test::chain_names(L, 1) == std::vector<std::string>{"s0", "s2"});
    REQUIRE(L.owners[0].empty());
}

TEST_CASE("OMA serves one unicast user", "[model][layout]")
{
    StrategyConfig sc;
    sc.kind = StrategyKind::OMA;
    sc.oma_target_user = 1;
    StreamLayout L = stream_layout(sc, test::system(3, 2, 10));
    REQUIRE(L.num_streams() == 2);
    REQUIRE(test::chain_names(L, 1) == std::vector<std::string>{"s0", "s2"});
    REQUIRE(test::chain_names(L, 0) == std::vector<std::string>{"s0"});
    sc.oma_target_user = 3;
    REQUIRE_THROWS_AS(stream_layout(sc, test::system(3, 2, 10)), std::invalid_argument);
}

TEST_CASE("stream counts per strategy", "[model][layout]")
{
    for (int K : {2, 3})
    {
        const SystemConfig sys = test::system(K, 2, 10);
        for (StrategyKind kind : kFive)
        {
            const int expected = kind == StrategyKind::GENERALIZED_RS ? (1 << K) - 1
                                 : kind == StrategyKind::SC_SIC       ? K
                                                                      : K + 1;
            INFO(to_string(kind) << " K=" << K);
            REQUIRE(stream_count(kind, K) == expected);
            for (const StrategyConfig &sc : enumerate_orders(kind, K))
                REQUIRE(stream_layout(sc, sys).num_streams() == expected);
        }
    }
}

TEST_CASE("every chain starts with the multicast stream and covers intended streams", "[model][layout]")
{
    for (int K : {2, 3})
        for (StrategyKind kind : kFive)
            for (const StrategyConfig &sc : enumerate_orders(kind, K))
            {
                StreamLayout L = stream_layout(sc, test::system(K, 2, 10));
                REQUIRE(L.streams[L.multicast_stream].carries_multicast);
                int multicast = 0;
                for (const auto &s : L.streams)
                    multicast += s.carries_multicast;
                REQUIRE(multicast == 1);
                for (int k = 0; k < K; ++k)
                {
                    INFO(to_string(kind) << " " << sc.label() << " user " << k);
                    REQUIRE(L.chains[k].front() == L.multicast_stream);
                    for (int s = 0; s < L.num_streams(); ++s)
                    {
                        const auto &iu = L.streams[s].intended_users;
                        if (std::find(iu.begin(), iu.end(), k) != iu.end())
                            REQUIRE(L.position(k, s) >= 0);
                    }
                }
            }
}

TEST_CASE("invalid orders and groupings are rejected", "[model][layout]")
{
    const SystemConfig sys = test::system(3, 2, 10);
    StrategyConfig sc;
    sc.kind = StrategyKind::SC_SIC;
    sc.decoding_order = {0, 0, 1};
    REQUIRE_THROWS_AS(stream_layout(sc, sys), std::invalid_argument);
    sc.kind = StrategyKind::SC_SIC_PER_GROUP;
    sc.grouping = {{0, 1}, {1, 2}};
    REQUIRE_THROWS_AS(stream_layout(sc, sys), std::invalid_argument);
    sc.grouping = {{0}, {1}};
    REQUIRE_THROWS_AS(stream_layout(sc, sys), std::invalid_argument);
    sc.kind = StrategyKind::GENERALIZED_RS;
    sc.grouping.clear();
    sc.subset_order = {{0, 1}, {0, 1}, {1, 2}};
    REQUIRE_THROWS_AS(stream_layout(sc, sys), std::invalid_argument);
}

TEST_CASE("closed-form model variable counts", "[model][count]")
{
    REQUIRE(model_variable_count(StrategyKind::MU_LP, 2, 2) == 6);
    REQUIRE(model_variable_count(StrategyKind::ONE_LAYER_RS, 3, 4) == 20);
    REQUIRE(model_variable_count(StrategyKind::GENERALIZED_RS, 3, 4) == 42);
    REQUIRE(model_variable_count(StrategyKind::SC_SIC, 3, 4) == 14);
    REQUIRE(model_variable_count(StrategyKind::SC_SIC_PER_GROUP, 3, 4) == 16);
}

TEST_CASE("strategy names round-trip", "[model]")
{
    for (StrategyKind kind : kFive)
        REQUIRE(parse_strategy_kind(to_string(kind)) == kind);
    REQUIRE(parse_strategy_kind("oma") == StrategyKind::OMA);
    REQUIRE_THROWS_AS(parse_strategy_kind("noma"), std::invalid_argument);
}

TEST_CASE("mapping MU-LP onto 1-layer RS keeps every user rate", "[model][seed]")
{
    ScenarioSpec sp;
    sp.kind = ScenarioKind::random_gaussian;
    sp.num_users = 3;
    sp.num_tx_antennas = 4;
    sp.variances = {1.0};
    sp.seed = 5;
    const CMat H = random_channels(sp).estimated;
    const SystemConfig sys = test::system(3, 4, 10);
    StrategyConfig mulp;
    mulp.kind = StrategyKind::MU_LP;
    StreamLayout L = stream_layout(mulp, sys);
    PrecoderSet P = default_precoders(mulp, L, H, sys);
    QosSpec qos = QosSpec::uniform(3, 0.0);
    WeightVector w = WeightVector::unit(3, 1.0);
    CommonRateAllocation a = default_allocation(stream_rate_caps(H, P, L, sys), L, w, qos);
    RateReport base = report(H, P, L, a, w, PowerModel{}, sys);

    for (StrategyKind target : {StrategyKind::ONE_LAYER_RS, StrategyKind::GENERALIZED_RS})
    {
        StrategyConfig tc = enumerate_orders(target, 3).front();
        Seed s = map_solution(mulp, P, a, tc, sys);
        RateReport r = report(H, s.precoders, stream_layout(tc, sys), s.allocation, w, PowerModel{}, sys);
        INFO(to_string(target));
        for (int k = 0; k < 3; ++k)
            REQUIRE_THAT(r.user_totals[k], WithinAbs(base.user_totals[k], 1e-12));
        REQUIRE_THAT(r.allocation.multicast_portion, WithinAbs(base.allocation.multicast_portion, 1e-12));
    }
}
