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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace noum
{
    namespace
    {
        std::string user_list(const std::vector<int> &users, bool separate)
        {
            std::string out;
            for (std::size_t i = 0; i < users.size(); ++i)
            {
                if (separate && i > 0)
                    out += "_";
                out += std::to_string(users[i] + 1);
            }
            return out;
        }

        bool is_permutation_of_range(const std::vector<int> &order, int n)
        {
            if (static_cast<int>(order.size()) != n)
                return false;
            std::vector<int> sorted = order;
            std::sort(sorted.begin(), sorted.end());
            for (int i = 0; i < n; ++i)
                if (sorted[i] != i)
                    return false;
            return true;
        }

        void combinations(int n, int m, int start, std::vector<int> &cur, std::vector<std::vector<int>> &out)
        {
            if (static_cast<int>(cur.size()) == m)
            {
                out.push_back(cur);
                return;
            }
            for (int i = start; i < n; ++i)
            {
                cur.push_back(i);
                combinations(n, m, i + 1, cur, out);
                cur.pop_back();
            }
        }

        std::vector<std::vector<int>> default_subset_order(int K)
        {
            std::vector<std::vector<int>> out;
            for (int m = K - 1; m >= 2; --m)
            {
                std::vector<int> cur;
                combinations(K, m, 0, cur, out);
            }
            return out;
        }

        std::vector<std::vector<int>> checked_subset_order(const StrategyConfig &st, int K)
        {
            if (st.subset_order.empty())
                return default_subset_order(K);
            std::vector<std::vector<int>> order = st.subset_order;
            for (auto &s : order)
            {
                std::sort(s.begin(), s.end());
                if (std::adjacent_find(s.begin(), s.end()) != s.end())
                    throw std::invalid_argument("generalized RS subset with repeated user");
                for (int u : s)
                    if (u < 0 || u >= K)
                        throw std::invalid_argument("generalized RS subset references unknown user");
                if (static_cast<int>(s.size()) < 2 || static_cast<int>(s.size()) > K - 1)
                    throw std::invalid_argument("generalized RS subsets must have between 2 and K-1 users");
            }
            for (std::size_t i = 1; i < order.size(); ++i)
                if (order[i].size() > order[i - 1].size())
                    throw std::invalid_argument("generalized RS subset order must list larger layers first");
            std::vector<std::vector<int>> expected = default_subset_order(K), given = order;
            std::sort(expected.begin(), expected.end());
            std::sort(given.begin(), given.end());
            if (expected != given)
                throw std::invalid_argument("generalized RS subset order must contain every intermediate subset exactly once");
            return order;
        }

        std::vector<std::vector<int>> checked_grouping(const StrategyConfig &st, int K)
        {
            if (st.grouping.empty())
            {
                std::vector<int> all(K);
                std::iota(all.begin(), all.end(), 0);
                return {all};
            }
            std::vector<int> seen(K, 0);
            for (const auto &g : st.grouping)
            {
                if (g.empty())
                    throw std::invalid_argument("grouping contains an empty group");
                for (int u : g)
                {
                    if (u < 0 || u >= K)
                        throw std::invalid_argument("grouping references unknown user");
                    if (seen[u]++)
                        throw std::invalid_argument("grouping is not disjoint");
                }
            }
            for (int k = 0; k < K; ++k)
                if (!seen[k])
                    throw std::invalid_argument("grouping does not cover every user");
            return st.grouping;
        }

        std::vector<int> checked_order(const StrategyConfig &st, int K)
        {
            if (st.decoding_order.empty())
            {
                std::vector<int> id(K);
                std::iota(id.begin(), id.end(), 0);
                return id;
            }
            if (!is_permutation_of_range(st.decoding_order, K))
                throw std::invalid_argument("decoding order is not a permutation of the users");
            return st.decoding_order;
        }

        std::vector<int> all_users(int K)
        {
            std::vector<int> v(K);
            std::iota(v.begin(), v.end(), 0);
            return v;
        }
    } // namespace

    double SystemConfig::noise(int user) const
    {
        if (noise_variance.empty())
            return 1.0;
        return noise_variance.at(user);
    }

    void SystemConfig::validate() const
    {
        if (num_users < 1)
            throw std::invalid_argument("num_users must be at least 1");
        if (num_tx_antennas < 1)
            throw std::invalid_argument("num_tx_antennas must be at least 1");
        if (!noise_variance.empty() && static_cast<int>(noise_variance.size()) != num_users)
            throw std::invalid_argument("noise_variance must have one entry per user");
        for (double s : noise_variance)
            if (!(s > 0.0))
                throw std::invalid_argument("noise variances must be positive");
        if (!(power_budget > 0.0))
            throw std::invalid_argument("power_budget must be positive");
    }

    double PowerModel::circuit_power(int num_tx_antennas) const
    {
        return num_tx_antennas * dynamic_power_per_chain + static_power;
    }

    void PowerModel::validate() const
    {
        if (!(amplifier_efficiency > 0.0 && amplifier_efficiency <= 1.0))
            throw std::invalid_argument("amplifier_efficiency must lie in (0,1]");
        if (dynamic_power_per_chain < 0.0 || static_power < 0.0)
            throw std::invalid_argument("circuit power terms must be nonnegative");
    }

    void ChannelSet::validate() const
    {
        if (estimated.rows() < 1 || estimated.cols() < 1)
            throw std::invalid_argument("channel set is empty");
        for (const auto &s : true_samples)
            if (s.rows() != estimated.rows() || s.cols() != estimated.cols())
                throw std::invalid_argument("channel sample dimensions do not match the estimate");
        if (!error_covariances.empty() && static_cast<int>(error_covariances.size()) != num_users())
            throw std::invalid_argument("error_covariances must have one entry per user");
        for (double s : error_covariances)
            if (s < 0.0)
                throw std::invalid_argument("error covariances must be nonnegative");
    }

    std::string to_string(StrategyKind kind)
    {
        switch (kind)
        {
        case StrategyKind::MU_LP:
            return "mu_lp";
        case StrategyKind::ONE_LAYER_RS:
            return "one_layer_rs";
        case StrategyKind::GENERALIZED_RS:
            return "generalized_rs";
        case StrategyKind::SC_SIC:
            return "sc_sic";
        case StrategyKind::SC_SIC_PER_GROUP:
            return "sc_sic_per_group";
        case StrategyKind::OMA:
            return "oma";
        }
        return "unknown";
    }

    StrategyKind parse_strategy_kind(std::string_view name)
    {
        for (StrategyKind k : {StrategyKind::MU_LP, StrategyKind::ONE_LAYER_RS, StrategyKind::GENERALIZED_RS,
                               StrategyKind::SC_SIC, StrategyKind::SC_SIC_PER_GROUP, StrategyKind::OMA})
            if (to_string(k) == name)
                return k;
        throw std::invalid_argument("unknown strategy '" + std::string(name) + "'");
    }

    std::string StrategyConfig::label() const
    {
        switch (kind)
        {
        case StrategyKind::SC_SIC:
        {
            if (decoding_order.empty())
                return "identity";
            std::string out;
            for (std::size_t i = 0; i < decoding_order.size(); ++i)
                out += (i ? ">" : "") + std::to_string(decoding_order[i] + 1);
            return out;
        }
        case StrategyKind::SC_SIC_PER_GROUP:
        {
            if (grouping.empty())
                return "single";
            std::string out;
            for (const auto &g : grouping)
            {
                out += "{";
                for (std::size_t i = 0; i < g.size(); ++i)
                    out += (i ? ">" : "") + std::to_string(g[i] + 1);
                out += "}";
            }
            return out;
        }
        case StrategyKind::GENERALIZED_RS:
        {
            if (subset_order.empty())
                return "default";
            std::string out;
            for (std::size_t i = 0; i < subset_order.size(); ++i)
                out += (i ? ">" : "") + user_list(subset_order[i], false);
            return out;
        }
        case StrategyKind::OMA:
            return "target=" + std::to_string(oma_target_user + 1);
        default:
            return "-";
        }
    }

    std::string StreamId::name() const
    {
        if (carries_multicast)
            return "s0";
        bool wide = std::any_of(intended_users.begin(), intended_users.end(), [](int u) { return u >= 9; });
        return "s" + user_list(intended_users, wide);
    }

    bool StreamLayout::is_private(int stream) const
    {
        if (streams[stream].carries_multicast)
            return false;
        return decoders[stream].size() == 1 && owners[stream].size() == 1 && decoders[stream][0] == owners[stream][0];
    }

    int StreamLayout::position(int user, int stream) const
    {
        const auto &c = chains.at(user);
        auto it = std::find(c.begin(), c.end(), stream);
        return it == c.end() ? -1 : static_cast<int>(it - c.begin());
    }

    std::vector<int> StreamLayout::interferers(int user, int stream) const
    {
        int pos = position(user, stream);
        if (pos < 0)
            throw std::logic_error("stream " + streams.at(stream).name() + " is not decoded by user " + std::to_string(user + 1));
        std::vector<char> skip(streams.size(), 0);
        for (int i = 0; i <= pos; ++i)
            skip[chains[user][i]] = 1;
        std::vector<int> out;
        for (int s = 0; s < num_streams(); ++s)
            if (!skip[s])
                out.push_back(s);
        return out;
    }

    StreamLayout stream_layout(const StrategyConfig &strategy, const SystemConfig &sys)
    {
        sys.validate();
        const int K = sys.num_users;
        StreamLayout L;
        L.num_users = K;
        L.chains.assign(K, {});

        auto add_stream = [&](std::vector<int> intended, bool multicast, std::vector<int> owners) {
            std::sort(intended.begin(), intended.end());
            L.streams.push_back({intended, multicast});
            L.owners.push_back(owners);
            return static_cast<int>(L.streams.size()) - 1;
        };

        switch (strategy.kind)
        {
        case StrategyKind::MU_LP:
        case StrategyKind::ONE_LAYER_RS:
        {
            bool rs = strategy.kind == StrategyKind::ONE_LAYER_RS;
            int s0 = add_stream(all_users(K), true, rs ? all_users(K) : std::vector<int>{});
            for (int k = 0; k < K; ++k)
            {
                int sk = add_stream({k}, false, {k});
                L.chains[k] = {s0, sk};
            }
            break;
        }
        case StrategyKind::GENERALIZED_RS:
        {
            auto subsets = checked_subset_order(strategy, K);
            int s0 = add_stream(all_users(K), true, all_users(K));
            for (int k = 0; k < K; ++k)
                L.chains[k].push_back(s0);
            for (const auto &sub : subsets)
            {
                int s = add_stream(sub, false, sub);
                for (int u : sub)
                    L.chains[u].push_back(s);
            }
            for (int k = 0; k < K; ++k)
                L.chains[k].push_back(add_stream({k}, false, {k}));
            break;
        }
        case StrategyKind::SC_SIC:
        {
            auto pi = checked_order(strategy, K);
            int s0 = add_stream(all_users(K), true, {pi[0]});
            std::vector<int> carried(K, s0);
            for (int i = 1; i < K; ++i)
                carried[i] = add_stream({pi[i]}, false, {pi[i]});
            for (int i = 0; i < K; ++i)
                for (int j = 0; j <= i; ++j)
                    L.chains[pi[i]].push_back(carried[j]);
            break;
        }
        case StrategyKind::SC_SIC_PER_GROUP:
        {
            auto groups = checked_grouping(strategy, K);
            int s0 = add_stream(all_users(K), true, {});
            for (int k = 0; k < K; ++k)
                L.chains[k].push_back(s0);
            for (const auto &g : groups)
            {
                std::vector<int> ids;
                for (int u : g)
                    ids.push_back(add_stream({u}, false, {u}));
                for (std::size_t i = 0; i < g.size(); ++i)
                    for (std::size_t j = 0; j <= i; ++j)
                        L.chains[g[i]].push_back(ids[j]);
            }
            break;
        }
        case StrategyKind::OMA:
        {
            int u = strategy.oma_target_user;
            if (u < 0 || u >= K)
                throw std::invalid_argument("OMA target user out of range");
            int s0 = add_stream(all_users(K), true, {});
            int su = add_stream({u}, false, {u});
            for (int k = 0; k < K; ++k)
                L.chains[k] = {s0};
            L.chains[u].push_back(su);
            break;
        }
        }

        L.multicast_stream = 0;
        L.decoders.assign(L.streams.size(), {});
        for (int k = 0; k < K; ++k)
            for (int s : L.chains[k])
                L.decoders[s].push_back(k);
        return L;
    }

    Seed map_solution(const StrategyConfig &src_strategy, const PrecoderSet &src_precoders,
                      const CommonRateAllocation &src_allocation, const StrategyConfig &target,
                      const SystemConfig &sys)
    {
        StreamLayout from = stream_layout(src_strategy, sys);
        StreamLayout to = stream_layout(target, sys);
        if (src_precoders.columns.cols() != from.num_streams() || src_precoders.columns.rows() != sys.num_tx_antennas)
            throw std::invalid_argument("source precoders do not match the source strategy");
        std::vector<int> pi = src_strategy.kind == StrategyKind::SC_SIC ? checked_order(src_strategy, sys.num_users)
                                                                        : std::vector<int>{};
        Seed seed;
        seed.strategy = target;
        seed.origin = to_string(src_strategy.kind);
        seed.precoders = PrecoderSet::zeros(sys.num_tx_antennas, to.num_streams());
        seed.allocation = CommonRateAllocation::zeros(to);
        seed.allocation.multicast_portion = src_allocation.multicast_portion;
        for (int s = 0; s < from.num_streams(); ++s)
        {
            StreamId id = from.streams[s];
            if (!pi.empty() && !id.carries_multicast)
            {
                auto it = std::find(pi.begin(), pi.end(), id.intended_users.at(0));
                id.intended_users.assign(it, pi.end());
                std::sort(id.intended_users.begin(), id.intended_users.end());
            }
            auto match = std::find(to.streams.begin(), to.streams.end(), id);
            const bool silent = src_precoders.columns.col(s).squaredNorm() == 0.0;
            if (match == to.streams.end())
            {
                if (silent)
                    continue;
                throw std::invalid_argument("stream " + from.streams[s].name() + " has no counterpart in " +
                                            to_string(target.kind));
            }
            const int t = static_cast<int>(match - to.streams.begin());
            seed.precoders.columns.col(t) = src_precoders.columns.col(s);
            if (from.is_private(s) || to.is_private(t))
                continue;
            for (int k : from.owners[s])
            {
                const double v = src_allocation.portions.at(s).at(k);
                if (v == 0.0)
                    continue;
                if (std::find(to.owners[t].begin(), to.owners[t].end(), k) == to.owners[t].end())
                    throw std::invalid_argument("portion of user " + std::to_string(k + 1) + " on " +
                                                from.streams[s].name() + " has no owner slot in " +
                                                to_string(target.kind));
                seed.allocation.portions[t][k] = v;
            }
        }
        return seed;
    }

    PrecoderSet PrecoderSet::zeros(int num_tx_antennas, int num_streams)
    {
        return {CMat::Zero(num_tx_antennas, num_streams)};
    }

    QosSpec QosSpec::uniform(int num_users, double threshold)
    {
        return {std::vector<double>(num_users, threshold), threshold};
    }

    void QosSpec::validate(int num_users) const
    {
        if (static_cast<int>(unicast_thresholds.size()) != num_users)
            throw std::invalid_argument("unicast_thresholds must have one entry per user");
        if (multicast_threshold < 0.0)
            throw std::invalid_argument("multicast threshold must be nonnegative");
        for (double r : unicast_thresholds)
            if (r < 0.0)
                throw std::invalid_argument("unicast thresholds must be nonnegative");
    }

    WeightVector WeightVector::unit(int num_users, double multicast_weight)
    {
        return {multicast_weight, std::vector<double>(num_users, 1.0)};
    }

    void WeightVector::validate(int num_users) const
    {
        if (static_cast<int>(unicast_weights.size()) != num_users)
            throw std::invalid_argument("unicast_weights must have one entry per user");
        bool positive = multicast_weight > 0.0;
        if (multicast_weight < 0.0)
            throw std::invalid_argument("weights must be nonnegative");
        for (double u : unicast_weights)
        {
            if (u < 0.0)
                throw std::invalid_argument("weights must be nonnegative");
            positive = positive || u > 0.0;
        }
        if (!positive)
            throw std::invalid_argument("at least one weight must be positive");
    }

    CommonRateAllocation CommonRateAllocation::zeros(const StreamLayout &layout)
    {
        CommonRateAllocation a;
        a.portions.assign(layout.num_streams(), std::vector<double>(layout.num_users, 0.0));
        return a;
    }

    void AlgorithmConfig::validate() const
    {
        if (!(convergence_tolerance > 0.0))
            throw std::invalid_argument("convergence tolerance must be positive");
        if (max_iterations < 1)
            throw std::invalid_argument("max_iterations must be positive");
        if (csit_sample_count < 1)
            throw std::invalid_argument("csit_sample_count must be positive");
        if (!(solver_tolerance > 0.0))
            throw std::invalid_argument("solver tolerance must be positive");
    }

    double total_power(const PrecoderSet &precoders, const PowerModel &pm, const SystemConfig &sys)
    {
        return precoders.trace_power() / pm.amplifier_efficiency + pm.circuit_power(sys.num_tx_antennas);
    }

    int model_variable_count(StrategyKind kind, int K, int Nt)
    {
        switch (kind)
        {
        case StrategyKind::MU_LP:
            return K * Nt + Nt;
        case StrategyKind::ONE_LAYER_RS:
            return K * Nt + Nt + K + 1;
        case StrategyKind::SC_SIC:
            return K * Nt + 2;
        case StrategyKind::SC_SIC_PER_GROUP:
            return K * Nt + Nt;
        case StrategyKind::GENERALIZED_RS:
            return (1 << K) * Nt + (1 << (K - 1)) * K + 1 - K;
        case StrategyKind::OMA:
            return 2 * Nt;
        }
        return 0;
    }

    int stream_count(StrategyKind kind, int K)
    {
        switch (kind)
        {
        case StrategyKind::MU_LP:
        case StrategyKind::ONE_LAYER_RS:
        case StrategyKind::SC_SIC_PER_GROUP:
            return K + 1;
        case StrategyKind::GENERALIZED_RS:
            return K == 1 ? 2 : (1 << K) - 1;
        case StrategyKind::SC_SIC:
            return K;
        case StrategyKind::OMA:
            return 2;
        }
        return 0;
    }

} // namespace noum
