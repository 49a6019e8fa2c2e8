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

#include "noum/scenarios.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace noum
{
    namespace
    {
        constexpr std::uint64_t tag_channel = 1;
        constexpr std::uint64_t tag_csit = 2;
        constexpr std::uint64_t tag_schedule = 3;

        std::seed_seq make_seq(std::uint64_t seed, const std::vector<std::uint64_t> &tags)
        {
            std::vector<std::uint32_t> words;
            words.reserve(2 * (tags.size() + 1));
            auto push = [&](std::uint64_t v)
            {
                words.push_back(static_cast<std::uint32_t>(v & 0xffffffffu));
                words.push_back(static_cast<std::uint32_t>(v >> 32));
            };
            push(seed);
            for (auto t : tags)
                push(t);
            return std::seed_seq(words.begin(), words.end());
        }

        void check_k(int K)
        {
            if (K < 1)
                throw std::invalid_argument("number of users must be positive");
            if (K > 4)
                throw std::invalid_argument("enumeration guard: at most 4 users");
        }
    } // namespace

    Rng::Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags)
        : Rng(seed, std::vector<std::uint64_t>(tags))
    {
    }

    Rng::Rng(std::uint64_t seed, const std::vector<std::uint64_t> &tags)
    {
        std::seed_seq seq = make_seq(seed, tags);
        eng_.seed(seq);
    }

    double Rng::uniform()
    {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    cplx Rng::complex_normal(double variance)
    {
        const double u1 = 1.0 - uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1)) * std::sqrt(0.5 * variance);
        const double a = 2.0 * std::numbers::pi * u2;
        return {r * std::cos(a), r * std::sin(a)};
    }

    int Rng::below(int n)
    {
        int v = static_cast<int>(uniform() * n);
        return std::min(v, n - 1);
    }

    std::uint64_t derive_seed(std::uint64_t seed, const std::vector<std::uint64_t> &tags)
    {
        std::seed_seq seq = make_seq(seed, tags);
        std::mt19937_64 eng(seq);
        return eng();
    }

    std::string to_string(ScenarioKind k)
    {
        switch (k)
        {
        case ScenarioKind::specific_two_user:
            return "specific_two_user";
        case ScenarioKind::specific_three_user:
            return "specific_three_user";
        case ScenarioKind::random_gaussian:
            return "random_gaussian";
        }
        return "?";
    }

    ScenarioKind parse_scenario_kind(const std::string &name)
    {
        for (auto k : {ScenarioKind::specific_two_user, ScenarioKind::specific_three_user, ScenarioKind::random_gaussian})
            if (to_string(k) == name)
                return k;
        throw std::invalid_argument("unknown scenario kind '" + name + "'");
    }

    void ScenarioSpec::validate() const
    {
        if (num_tx_antennas < 1)
            throw std::invalid_argument("scenario: nt must be positive");
        if (num_users < 1)
            throw std::invalid_argument("scenario: k must be positive");
        const double half_pi = std::numbers::pi / 2;
        switch (kind)
        {
        case ScenarioKind::specific_two_user:
        case ScenarioKind::specific_three_user:
        {
            const int need = kind == ScenarioKind::specific_two_user ? 2 : 3;
            if (num_users != need)
                throw std::invalid_argument("scenario: " + to_string(kind) + " needs k = " + std::to_string(need));
            if (!(gamma > 0 && gamma <= 1))
                throw std::invalid_argument("scenario: gamma must lie in (0, 1]");
            if (need == 3 && !(gamma2 > 0 && gamma2 <= 1))
                throw std::invalid_argument("scenario: gamma2 must lie in (0, 1]");
            if (!(theta > 0 && theta < half_pi))
                throw std::invalid_argument("scenario: theta must lie in (0, pi/2)");
            if (need == 3 && theta2 != 0 && !(theta2 > 0))
                throw std::invalid_argument("scenario: theta2 must be positive");
            break;
        }
        case ScenarioKind::random_gaussian:
            if (variances.size() != 1 && static_cast<int>(variances.size()) != num_users)
                throw std::invalid_argument("scenario: variances needs one entry or one per user");
            for (double v : variances)
                if (!(v > 0))
                    throw std::invalid_argument("scenario: variances must be positive");
            break;
        }
        if (!csit.perfect)
        {
            if (csit.samples < 1)
                throw std::invalid_argument("scenario: csit samples must be at least 1");
            if (!(csit.tau >= 0))
                throw std::invalid_argument("scenario: csit tau must be nonnegative");
            if (!csit.scale.empty() && static_cast<int>(csit.scale.size()) != num_users)
                throw std::invalid_argument("scenario: csit scale needs one entry per user");
            for (double s : csit.scale)
                if (!(s >= 0))
                    throw std::invalid_argument("scenario: csit scale must be nonnegative");
        }
    }

    std::string ScenarioSpec::canonical() const
    {
        std::ostringstream os;
        os.precision(17);
        os << to_string(kind) << ";nt=" << num_tx_antennas << ";k=" << num_users << ";seed=" << seed;
        if (kind != ScenarioKind::random_gaussian)
            os << ";gamma=" << gamma << ";gamma2=" << gamma2 << ";theta=" << theta << ";theta2=" << theta2;
        else
        {
            os << ";var=";
            for (double v : variances)
                os << v << ',';
        }
        if (!csit.perfect)
        {
            os << ";tau=" << csit.tau << ";m=" << csit.samples << ";scale=";
            for (double s : csit.scale)
                os << s << ',';
        }
        return os.str();
    }

    ChannelSet specific_channels(const ScenarioSpec &spec)
    {
        if (spec.kind == ScenarioKind::random_gaussian)
            throw std::invalid_argument("specific_channels needs a specific_* scenario");
        spec.validate();
        const int nt = spec.num_tx_antennas;
        auto steering = [nt](double strength, double phase)
        {
            CVec h(nt);
            for (int n = 0; n < nt; ++n)
                h(n) = strength * std::polar(1.0, -phase * n);
            return h;
        };
        ChannelSet c;
        c.estimated = CMat::Ones(nt, spec.num_users);
        c.estimated.col(1) = steering(spec.gamma, spec.theta);
        if (spec.kind == ScenarioKind::specific_three_user)
        {
            const double theta2 = spec.theta2 != 0 ? spec.theta2 : 2 * spec.theta;
            c.estimated.col(2) = steering(spec.gamma2, theta2);
        }
        return c;
    }

    ChannelSet random_channels(const ScenarioSpec &spec)
    {
        if (spec.kind != ScenarioKind::random_gaussian)
            throw std::invalid_argument("random_channels needs a random_gaussian scenario");
        const int K = spec.num_users;
        const int nt = spec.num_tx_antennas;
        if (K < 1 || nt < 1)
            throw std::invalid_argument("random_channels: sizes must be positive");
        if (spec.variances.size() != 1 && static_cast<int>(spec.variances.size()) != K)
            throw std::invalid_argument("random_channels: variances needs one entry or one per user");
        ChannelSet c;
        c.estimated.resize(nt, K);
        for (int k = 0; k < K; ++k)
        {
            const double var = spec.variances.size() == 1 ? spec.variances[0] : spec.variances[k];
            Rng rng(spec.seed, {tag_channel, static_cast<std::uint64_t>(k)});
            for (int n = 0; n < nt; ++n)
                c.estimated(n, k) = rng.complex_normal(var);
        }
        return c;
    }

    ChannelSet csit_samples(const CMat &estimate, double tau, double power_budget, const std::vector<double> &scale,
                            int num_samples, std::uint64_t seed)
    {
        if (num_samples < 1)
            throw std::invalid_argument("csit_samples needs at least one sample");
        if (!(power_budget > 0))
            throw std::invalid_argument("csit_samples needs a positive power budget");
        const int K = static_cast<int>(estimate.cols());
        const int nt = static_cast<int>(estimate.rows());
        if (!scale.empty() && static_cast<int>(scale.size()) != K)
            throw std::invalid_argument("csit_samples: scale needs one entry per user");
        ChannelSet c;
        c.estimated = estimate;
        c.csit_exponent = tau;
        c.error_covariances.resize(K);
        for (int k = 0; k < K; ++k)
        {
            const double s = scale.empty() ? 1.0 : scale[k];
            c.error_covariances[k] = (std::isinf(tau) || s == 0.0) ? 0.0 : s * std::pow(power_budget, -tau);
        }
        c.true_samples.reserve(num_samples);
        for (int m = 0; m < num_samples; ++m)
        {
            CMat H = estimate;
            for (int k = 0; k < K; ++k)
            {
                if (c.error_covariances[k] == 0.0)
                    continue;
                Rng rng(seed, {tag_csit, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(k)});
                for (int n = 0; n < nt; ++n)
                    H(n, k) += rng.complex_normal(c.error_covariances[k]);
            }
            c.true_samples.push_back(std::move(H));
        }
        return c;
    }

    std::string to_string(ScheduleMethod m)
    {
        switch (m)
        {
        case ScheduleMethod::correlation:
            return "correlation";
        case ScheduleMethod::best_strength:
            return "best_strength";
        case ScheduleMethod::none:
            return "none";
        }
        return "?";
    }

    ScheduleMethod parse_schedule_method(const std::string &name)
    {
        for (auto m : {ScheduleMethod::correlation, ScheduleMethod::best_strength, ScheduleMethod::none})
            if (to_string(m) == name)
                return m;
        throw std::invalid_argument("unknown scheduling method '" + name + "'");
    }

    std::vector<int> schedule_users(const CMat &pool, int num_select, ScheduleMethod method, std::uint64_t seed)
    {
        const int N = static_cast<int>(pool.cols());
        if (num_select < 1)
            throw std::invalid_argument("schedule_users: must select at least one user");
        if (N < num_select)
            throw std::invalid_argument("schedule_users: candidate pool smaller than the number of users");
        std::vector<double> norm(N);
        for (int i = 0; i < N; ++i)
            norm[i] = pool.col(i).norm();
        std::vector<int> picked;
        std::vector<char> used(N, 0);
        auto take = [&](int i)
        {
            picked.push_back(i);
            used[i] = 1;
        };
        switch (method)
        {
        case ScheduleMethod::none:
        {
            std::vector<int> idx(N);
            for (int i = 0; i < N; ++i)
                idx[i] = i;
            Rng rng(seed, {tag_schedule});
            for (int i = N - 1; i > 0; --i)
                std::swap(idx[i], idx[rng.below(i + 1)]);
            picked.assign(idx.begin(), idx.begin() + num_select);
            break;
        }
        case ScheduleMethod::best_strength:
            while (static_cast<int>(picked.size()) < num_select)
            {
                int best = -1;
                for (int i = 0; i < N; ++i)
                    if (!used[i] && (best < 0 || norm[i] > norm[best]))
                        best = i;
                take(best);
            }
            break;
        case ScheduleMethod::correlation:
            while (static_cast<int>(picked.size()) < num_select)
            {
                int best = -1;
                double best_score = -1.0;
                for (int i = 0; i < N; ++i)
                {
                    if (used[i])
                        continue;
                    double worst = 0.0;
                    for (int j : picked)
                    {
                        const double d = norm[i] * norm[j];
                        const double corr = d > 0 ? std::norm(pool.col(i).dot(pool.col(j))) / (d * d) : 1.0;
                        worst = std::max(worst, corr);
                    }
                    const double score = norm[i] * std::max(0.0, 1.0 - worst);
                    if (score > best_score)
                    {
                        best_score = score;
                        best = i;
                    }
                }
                take(best);
            }
            break;
        }
        return picked;
    }

    std::vector<std::vector<std::vector<int>>> set_partitions(int num_users)
    {
        check_k(num_users);
        std::vector<std::vector<std::vector<int>>> out;
        std::vector<int> a(num_users, 0);
        // Restricted growth strings a[0] = 0, a[i] <= 1 + max(a[0..i-1]).
        while (true)
        {
            int blocks = *std::max_element(a.begin(), a.end()) + 1;
            std::vector<std::vector<int>> part(blocks);
            for (int i = 0; i < num_users; ++i)
                part[a[i]].push_back(i);
            out.push_back(std::move(part));
            int i = num_users - 1;
            for (; i > 0; --i)
            {
                int m = *std::max_element(a.begin(), a.begin() + i);
                if (a[i] <= m)
                {
                    ++a[i];
                    std::fill(a.begin() + i + 1, a.end(), 0);
                    break;
                }
            }
            if (i == 0)
                break;
        }
        return out;
    }

    namespace
    {
        // Cartesian product of the permutations of each list, first list varying slowest.
        template <class T>
        std::vector<std::vector<std::vector<T>>> permutation_product(const std::vector<std::vector<T>> &lists)
        {
            std::vector<std::vector<std::vector<T>>> out{{}};
            for (const auto &base : lists)
            {
                std::vector<std::vector<T>> perms;
                std::vector<T> p = base;
                std::sort(p.begin(), p.end());
                do
                    perms.push_back(p);
                while (std::next_permutation(p.begin(), p.end()));
                std::vector<std::vector<std::vector<T>>> next;
                for (const auto &prefix : out)
                    for (const auto &q : perms)
                    {
                        auto v = prefix;
                        v.push_back(q);
                        next.push_back(std::move(v));
                    }
                out = std::move(next);
            }
            return out;
        }

        std::vector<std::vector<int>> subsets_of_size(int K, int m)
        {
            std::vector<std::vector<int>> out;
            for (int mask = 0; mask < (1 << K); ++mask)
            {
                if (__builtin_popcount(mask) != m)
                    continue;
                std::vector<int> s;
                for (int k = 0; k < K; ++k)
                    if (mask & (1 << k))
                        s.push_back(k);
                out.push_back(s);
            }
            std::sort(out.begin(), out.end());
            return out;
        }
    } // namespace

    std::vector<StrategyConfig> enumerate_orders(StrategyKind kind, int num_users,
                                                 const std::vector<std::vector<int>> *fixed_partition)
    {
        check_k(num_users);
        const int K = num_users;
        std::vector<StrategyConfig> out;
        StrategyConfig base;
        base.kind = kind;
        switch (kind)
        {
        case StrategyKind::MU_LP:
        case StrategyKind::ONE_LAYER_RS:
            out.push_back(base);
            break;
        case StrategyKind::SC_SIC:
        {
            std::vector<int> p(K);
            for (int k = 0; k < K; ++k)
                p[k] = k;
            do
            {
                base.decoding_order = p;
                out.push_back(base);
            } while (std::next_permutation(p.begin(), p.end()));
            break;
        }
        case StrategyKind::GENERALIZED_RS:
        {
            std::vector<std::vector<std::vector<int>>> layers;
            for (int m = K - 1; m >= 2; --m)
                layers.push_back(subsets_of_size(K, m));
            for (const auto &choice : permutation_product(layers))
            {
                base.subset_order.clear();
                for (const auto &layer : choice)
                    base.subset_order.insert(base.subset_order.end(), layer.begin(), layer.end());
                out.push_back(base);
            }
            break;
        }
        case StrategyKind::SC_SIC_PER_GROUP:
        {
            std::vector<std::vector<std::vector<int>>> parts;
            if (fixed_partition)
                parts.push_back(*fixed_partition);
            else
                parts = set_partitions(K);
            for (const auto &part : parts)
                for (const auto &orders : permutation_product(part))
                {
                    base.grouping = orders;
                    out.push_back(base);
                }
            break;
        }
        case StrategyKind::OMA:
            for (int k = 0; k < K; ++k)
            {
                base.oma_target_user = k;
                out.push_back(base);
            }
            break;
        }
        return out;
    }

    namespace
    {
        CVec unit_or_first(const CVec &v)
        {
            const double n = v.norm();
            if (n > 0)
                return v / n;
            CVec e = CVec::Zero(v.size());
            e(0) = 1.0;
            return e;
        }

        CVec dominant_direction(const CMat &H, const std::vector<int> &users)
        {
            if (users.size() == 1)
                return unit_or_first(H.col(users[0]));
            CMat S(H.rows(), static_cast<Eigen::Index>(users.size()));
            for (std::size_t i = 0; i < users.size(); ++i)
                S.col(static_cast<Eigen::Index>(i)) = H.col(users[i]);
            if (S.norm() == 0)
                return unit_or_first(S.col(0));
            Eigen::JacobiSVD<CMat> svd(S, Eigen::ComputeThinU);
            return unit_or_first(svd.matrixU().col(0));
        }
    } // namespace

    PrecoderSet default_precoders(const StrategyConfig &strategy, const StreamLayout &layout, const CMat &H,
                                  const SystemConfig &sys)
    {
        const int S = layout.num_streams();
        const double Pt = sys.power_budget;
        std::vector<double> q(S, 0.0);
        const bool rs = strategy.kind == StrategyKind::ONE_LAYER_RS || strategy.kind == StrategyKind::GENERALIZED_RS;
        if (rs && S > 1)
        {
            q[layout.multicast_stream] = 0.5 * Pt;
            for (int s = 0; s < S; ++s)
                if (s != layout.multicast_stream)
                    q[s] = 0.5 * Pt / (S - 1);
        }
        else
            std::fill(q.begin(), q.end(), Pt / S);
        PrecoderSet P = PrecoderSet::zeros(sys.num_tx_antennas, S);
        for (int s = 0; s < S; ++s)
            P.columns.col(s) = std::sqrt(q[s]) * dominant_direction(H, layout.decoders[s]);
        return P;
    }

    std::string channel_to_text(const CMat &H, std::uint64_t seed)
    {
        std::string out = "K " + std::to_string(H.cols()) + "\nNt " + std::to_string(H.rows()) + "\nseed " +
                          std::to_string(seed) + "\n";
        char buf[64];
        for (Eigen::Index k = 0; k < H.cols(); ++k)
        {
            for (Eigen::Index n = 0; n < H.rows(); ++n)
            {
                std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", n ? " " : "", H(n, k).real(), H(n, k).imag());
                out += buf;
            }
            out += '\n';
        }
        return out;
    }

    CMat channel_from_text(const std::string &text, std::uint64_t *seed)
    {
        std::istringstream is(text);
        std::string key;
        long K = -1, nt = -1;
        unsigned long long sd = 0;
        for (int i = 0; i < 3; ++i)
        {
            if (!(is >> key))
                throw std::invalid_argument("channel text: truncated header");
            if (key == "K")
                is >> K;
            else if (key == "Nt")
                is >> nt;
            else if (key == "seed")
                is >> sd;
            else
                throw std::invalid_argument("channel text: unknown header key '" + key + "'");
        }
        if (!is || K < 1 || nt < 1)
            throw std::invalid_argument("channel text: bad header");
        CMat H(nt, K);
        for (long k = 0; k < K; ++k)
            for (long n = 0; n < nt; ++n)
            {
                std::string tok;
                if (!(is >> tok))
                    throw std::invalid_argument("channel text: missing entries");
                auto comma = tok.find(',');
                if (comma == std::string::npos)
                    throw std::invalid_argument("channel text: entry '" + tok + "' is not re,im");
                H(n, k) = cplx(std::stod(tok.substr(0, comma)), std::stod(tok.substr(comma + 1)));
            }
        if (seed)
            *seed = sd;
        return H;
    }

} // namespace noum
