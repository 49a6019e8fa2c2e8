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

#include "noum/rates.hpp"
#include "noum/scenarios.hpp"

#include "support.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace noum;
using Catch::Matchers::WithinAbs;

namespace
{
    StrategyConfig kind_only(StrategyKind k)
    {
        StrategyConfig sc;
        sc.kind = k;
        return sc;
    }

    // Direct SINR evaluation from the listed interferer rule, independent of the library's gain matrix.
    double direct_sinr(const CMat &H, const CMat &P, const std::vector<std::vector<int>> &chains, int user, int stream,
                       double noise)
    {
        const CVec h = H.col(user);
        auto gain = [&](int s)
        {
            cplx acc = 0;
            for (int n = 0; n < h.size(); ++n)
                acc += std::conj(h(n)) * P(n, s);
            return std::norm(acc);
        };
        const auto &chain = chains[user];
        int pos = -1;
        for (std::size_t i = 0; i < chain.size(); ++i)
            if (chain[i] == stream)
                pos = static_cast<int>(i);
        double interference = noise;
        for (int s = 0; s < P.cols(); ++s)
        {
            if (s == stream)
                continue;
            bool cancelled = false;
            for (int i = 0; i < pos; ++i)
                cancelled = cancelled || chain[i] == s;
            if (!cancelled)
                interference += gain(s);
        }
        return gain(stream) / interference;
    }
} // namespace

TEST_CASE("SINR of the multicast stream for a single active precoder", "[rates][sinr]")
{
    const SystemConfig sys = test::system(2, 2, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::MU_LP), sys);
    CMat H(2, 2);
    H << 1, 0.3, 1, -0.7;
    PrecoderSet P = PrecoderSet::zeros(2, 3);
    P.columns(0, 0) = std::sqrt(2.0);
    REQUIRE_THAT(sinr(H, P, L, sys, 0, 0), WithinAbs(2.0, 1e-12));
}

TEST_CASE("zero signal gives zero SINR", "[rates][sinr]")
{
    const SystemConfig sys = test::system(2, 2, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::ONE_LAYER_RS), sys);
    CMat H = CMat::Ones(2, 2);
    PrecoderSet P = PrecoderSet::zeros(2, 3);
    P.columns(0, 2) = 1.0;
    REQUIRE(sinr(H, P, L, sys, 0, 1) == 0.0);
}

TEST_CASE("1-layer RS single-antenna hand evaluation", "[rates][sinr]")
{
    const SystemConfig sys = test::system(2, 1, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::ONE_LAYER_RS), sys);
    CMat H = CMat::Ones(1, 2);
    PrecoderSet P = PrecoderSet::zeros(1, 3);
    P.columns(0, 0) = 1.0;
    P.columns(0, 1) = 1.0;
    REQUIRE_THAT(sinr(H, P, L, sys, 0, 0), WithinAbs(0.5, 1e-12));
    REQUIRE_THAT(sinr(H, P, L, sys, 0, 1), WithinAbs(1.0, 1e-12));
}

TEST_CASE("SINR of a stream outside the chain is a contract violation", "[rates][sinr]")
{
    const SystemConfig sys = test::system(2, 1, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::MU_LP), sys);
    REQUIRE_THROWS_AS(sinr(CMat::Ones(1, 2), PrecoderSet::zeros(1, 3), L, sys, 0, 2), std::logic_error);
}

TEST_CASE("stream caps take the weakest decoder", "[rates][caps]")
{
    const SystemConfig sys = test::system(2, 1, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::ONE_LAYER_RS), sys);
    std::vector<std::vector<double>> rates = {{std::log2(2.0), std::log2(4.0)}, {0.7, 0.0}, {0.0, 1.3}};
    auto caps = caps_from_rates(rates, L);
    REQUIRE_THAT(caps[0], WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(caps[1], WithinAbs(0.7, 1e-15));
    REQUIRE_THAT(caps[2], WithinAbs(1.3, 1e-15));
}

TEST_CASE("symmetric users share the multicast cap", "[rates][caps]")
{
    const SystemConfig sys = test::system(2, 2, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::ONE_LAYER_RS), sys);
    CMat H(2, 2);
    H << 1, 0, 0, 1;
    PrecoderSet P = PrecoderSet::zeros(2, 3);
    P.columns(0, 0) = 1.0;
    P.columns(1, 0) = 1.0;
    P.columns(0, 1) = 0.5;
    P.columns(1, 2) = 0.5;
    auto rates = decode_rates(H, P, L, sys);
    REQUIRE_THAT(rates[0][0], WithinAbs(rates[0][1], 1e-15));
    REQUIRE_THAT(stream_rate_caps(H, P, L, sys)[0], WithinAbs(rates[0][0], 1e-15));
}

TEST_CASE("allocation validity examples", "[rates][allocation]")
{
    const SystemConfig sys = test::system(2, 1, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::ONE_LAYER_RS), sys);
    std::vector<double> caps = {1.0, 0.0, 0.0};
    CommonRateAllocation a = CommonRateAllocation::zeros(L);

    SECTION("zero allocation is feasible only without a multicast threshold")
    {
        QosSpec q = QosSpec::uniform(2, 0.0);
        REQUIRE(validate_allocation(a, caps, q, L).feasible);
        q.multicast_threshold = 0.1;
        REQUIRE_FALSE(validate_allocation(a, caps, q, L).feasible);
    }
    SECTION("oversubscribed common stream")
    {
        a.multicast_portion = 0.5;
        a.portions[0][0] = 0.3;
        a.portions[0][1] = 0.3;
        auto rep = validate_allocation(a, caps, QosSpec::uniform(2, 0.0), L);
        REQUIRE_FALSE(rep.feasible);
        REQUIRE_THAT(rep.sharing_slack[0], WithinAbs(-0.1, 1e-12));
    }
    SECTION("exactly full common stream")
    {
        a.multicast_portion = 0.5;
        a.portions[0][0] = 0.5;
        QosSpec q = QosSpec::uniform(2, 0.0);
        q.multicast_threshold = 0.5;
        auto rep = validate_allocation(a, caps, q, L);
        REQUIRE(rep.feasible);
        REQUIRE_THAT(rep.sharing_slack[0], WithinAbs(0.0, 1e-15));
        REQUIRE_THAT(rep.multicast_slack, WithinAbs(0.0, 1e-15));
    }
    SECTION("negative portions are infeasible")
    {
        a.portions[0][1] = -1e-3;
        auto rep = validate_allocation(a, caps, QosSpec::uniform(2, 0.0), L);
        REQUIRE_FALSE(rep.feasible);
        REQUIRE_THAT(rep.nonnegativity_slack, WithinAbs(-1e-3, 1e-15));
    }
}

TEST_CASE("report with zero precoders", "[rates][report]")
{
    const SystemConfig sys = test::system(2, 2, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::ONE_LAYER_RS), sys);
    PowerModel pm;
    pm.static_power = 2.0;
    RateReport r = report(CMat::Ones(2, 2), PrecoderSet::zeros(2, 3), L, CommonRateAllocation::zeros(L),
                          WeightVector::unit(2, 1.0), pm, sys);
    REQUIRE(r.wsr == 0.0);
    REQUIRE(r.ee == 0.0);
    REQUIRE_THAT(r.total_power, WithinAbs(2.0, 1e-15));
}

TEST_CASE("report sums private rates and owned portions", "[rates][report]")
{
    const SystemConfig sys = test::system(2, 1, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::ONE_LAYER_RS), sys);
    CMat H = CMat::Ones(1, 2);
    PrecoderSet P = PrecoderSet::zeros(1, 3);
    P.columns(0, 0) = 1.0;
    P.columns(0, 1) = 1.0;
    CommonRateAllocation a = CommonRateAllocation::zeros(L);
    a.multicast_portion = std::log2(1.5);
    PowerModel pm;
    pm.amplifier_efficiency = 1.0;
    pm.static_power = 1.0;
    RateReport r = report(H, P, L, a, WeightVector::unit(2, 1.0), pm, sys);
    // User 1 sees its private stream after cancelling s0; user 2 has no private power.
    REQUIRE_THAT(r.user_totals[0], WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(r.user_totals[1], WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(r.wsr, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(r.ee, WithinAbs((std::log2(1.5) + 1.0) / 3.0, 1e-12));

    a.portions[0][1] = 0.25;
    a.multicast_portion = std::log2(1.5) - 0.25;
    r = report(H, P, L, a, WeightVector::unit(2, 1.0), pm, sys);
    REQUIRE_THAT(r.user_totals[1], WithinAbs(0.25, 1e-12));
}

TEST_CASE("sample averages", "[rates][average]")
{
    const SystemConfig sys = test::system(2, 1, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::MU_LP), sys);
    PrecoderSet P = PrecoderSet::zeros(1, 3);
    P.columns(0, 1) = 1.0;
    const WeightVector w = WeightVector::unit(2, 1.0);
    const QosSpec q = QosSpec::uniform(2, 0.0);

    ChannelSet one;
    one.estimated = CMat::Ones(1, 2);
    one.true_samples = {one.estimated};
    auto a = default_allocation(stream_rate_caps(one.estimated, P, L, sys), L, w, q);
    RateReport single = report(one.estimated, P, L, a, w, PowerModel{}, sys);
    RateReport avg = average_report(one, P, L, a, w, PowerModel{}, sys);
    REQUIRE_THAT(avg.wsr, WithinAbs(single.wsr, 1e-15));

    ChannelSet two = one;
    CMat h1 = CMat::Ones(1, 2), h2 = CMat::Ones(1, 2);
    h2(0, 0) = std::sqrt(3.0);
    two.true_samples = {h1, h2};
    RateReport r2 = average_report(two, P, L, a, w, PowerModel{}, sys);
    REQUIRE_THAT(r2.decode_rates[1][0], WithinAbs(1.5, 1e-12));

    ChannelSet empty = one;
    empty.true_samples.clear();
    REQUIRE_THROWS_AS(average_report(empty, P, L, a, w, PowerModel{}, sys), std::invalid_argument);
}

TEST_CASE("SINR is invariant to precoder phase rotations", "[rates][property]")
{
    std::mt19937_64 eng(3);
    std::normal_distribution<double> nd;
    const SystemConfig sys = test::system(3, 3, 10);
    for (StrategyKind kind : {StrategyKind::ONE_LAYER_RS, StrategyKind::GENERALIZED_RS, StrategyKind::SC_SIC})
    {
        StrategyConfig sc = enumerate_orders(kind, 3).front();
        StreamLayout L = stream_layout(sc, sys);
        CMat H(3, 3);
        PrecoderSet P = PrecoderSet::zeros(3, L.num_streams());
        for (int i = 0; i < H.size(); ++i)
            H(i) = cplx(nd(eng), nd(eng));
        for (int i = 0; i < P.columns.size(); ++i)
            P.columns(i) = cplx(nd(eng), nd(eng));
        PrecoderSet R = P;
        for (int s = 0; s < L.num_streams(); ++s)
            R.columns.col(s) *= std::polar(1.0, 0.37 * (s + 1));
        auto a = decode_rates(H, P, L, sys), b = decode_rates(H, R, L, sys);
        for (int s = 0; s < L.num_streams(); ++s)
            for (int k = 0; k < 3; ++k)
                REQUIRE_THAT(a[s][k], WithinAbs(b[s][k], 1e-12));
    }
}

TEST_CASE("decode rate grows with the stream's own precoder norm", "[rates][property]")
{
    std::mt19937_64 eng(9);
    std::normal_distribution<double> nd;
    const SystemConfig sys = test::system(2, 2, 10);
    StreamLayout L = stream_layout(kind_only(StrategyKind::ONE_LAYER_RS), sys);
    for (int trial = 0; trial < 20; ++trial)
    {
        CMat H(2, 2);
        PrecoderSet P = PrecoderSet::zeros(2, 3);
        for (int i = 0; i < H.size(); ++i)
            H(i) = cplx(nd(eng), nd(eng));
        for (int i = 0; i < P.columns.size(); ++i)
            P.columns(i) = cplx(nd(eng), nd(eng));
        for (int s = 0; s < 3; ++s)
        {
            PrecoderSet Q = P;
            Q.columns.col(s) *= 1.5;
            auto a = decode_rates(H, P, L, sys), b = decode_rates(H, Q, L, sys);
            for (int k : L.decoders[s])
                REQUIRE(b[s][k] >= a[s][k] - 1e-15);
        }
    }
}

TEST_CASE("generalized RS with silent shared streams matches MU-LP", "[rates][property]")
{
    std::mt19937_64 eng(21);
    std::normal_distribution<double> nd;
    const SystemConfig sys = test::system(3, 4, 10);
    StrategyConfig g = enumerate_orders(StrategyKind::GENERALIZED_RS, 3).front();
    StreamLayout LG = stream_layout(g, sys);
    StreamLayout LM = stream_layout(kind_only(StrategyKind::MU_LP), sys);
    CMat H(4, 3);
    for (int i = 0; i < H.size(); ++i)
        H(i) = cplx(nd(eng), nd(eng));
    PrecoderSet PM = PrecoderSet::zeros(4, LM.num_streams());
    for (int i = 0; i < PM.columns.size(); ++i)
        PM.columns(i) = cplx(nd(eng), nd(eng));
    PrecoderSet PG = PrecoderSet::zeros(4, LG.num_streams());
    PG.columns.col(0) = PM.columns.col(0);
    for (int k = 0; k < 3; ++k)
        PG.columns.col(test::stream_index(LG, "s" + std::to_string(k + 1))) = PM.columns.col(k + 1);
    const WeightVector w = WeightVector::unit(3, 1.0);
    RateReport rm = report(H, PM, LM, CommonRateAllocation::zeros(LM), w, PowerModel{}, sys);
    RateReport rg = report(H, PG, LG, CommonRateAllocation::zeros(LG), w, PowerModel{}, sys);
    for (int k = 0; k < 3; ++k)
        REQUIRE_THAT(rg.user_totals[k], WithinAbs(rm.user_totals[k], 1e-12));
    REQUIRE_THAT(rg.caps[0], WithinAbs(rm.caps[0], 1e-12));
}

TEST_CASE("report matches a direct evaluator on a precoder grid", "[rates][oracle]")
{
    const double levels[] = {0.0, 0.5, 1.0};
    const cplx phases[] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0)};
    for (int Nt : {1, 2})
        for (StrategyKind kind : {StrategyKind::MU_LP, StrategyKind::ONE_LAYER_RS, StrategyKind::SC_SIC})
            for (const StrategyConfig &sc : enumerate_orders(kind, 2))
            {
                const SystemConfig sys = test::system(2, Nt, 10);
                StreamLayout L = stream_layout(sc, sys);
                CMat H(Nt, 2);
                for (int n = 0; n < Nt; ++n)
                {
                    H(n, 0) = cplx(1.0, 0.2 * n);
                    H(n, 1) = cplx(0.4, -0.8 + n);
                }
                const int S = L.num_streams();
                const int combos = static_cast<int>(std::pow(9, S));
                for (int c = 0; c < combos; c += 7)
                {
                    PrecoderSet P = PrecoderSet::zeros(Nt, S);
                    int code = c;
                    for (int s = 0; s < S; ++s, code /= 9)
                        for (int n = 0; n < Nt; ++n)
                            P.columns(n, s) = levels[code % 3] * phases[(code / 3 + n) % 3];
                    auto rates = decode_rates(H, P, L, sys);
                    for (int s = 0; s < S; ++s)
                        for (int k : L.decoders[s])
                            REQUIRE_THAT(rates[s][k],
                                         WithinAbs(std::log2(1.0 + direct_sinr(H, P.columns, L.chains, k, s, 1.0)),
                                                   1e-12));
                }
            }
}
