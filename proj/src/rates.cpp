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

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace noum
{
    Eigen::MatrixXd received_gains(const CMat &H, const PrecoderSet &precoders)
    {
        if (H.rows() != precoders.columns.rows())
            throw std::invalid_argument("precoder length does not match the number of transmit antennas");
        return (H.adjoint() * precoders.columns).cwiseAbs2();
    }

    namespace
    {
        // SINR of every chain position of one user, given the gains row.
        void chain_sinrs(const Eigen::MatrixXd &G, const StreamLayout &layout, double noise, int k,
                         std::vector<double> &out)
        {
            double remaining = G.row(k).sum() + noise;
            out.clear();
            for (int s : layout.chains[k])
            {
                double interference = remaining - G(k, s);
                out.push_back(G(k, s) / std::max(interference, noise));
                remaining -= G(k, s);
            }
        }
    } // namespace

    double sinr(const CMat &H, const PrecoderSet &precoders, const StreamLayout &layout, const SystemConfig &sys,
                int user, int stream)
    {
        std::vector<int> I = layout.interferers(user, stream);
        CVec h = H.col(user);
        double sig = std::norm(h.dot(precoders.columns.col(stream)));
        double den = sys.noise(user);
        for (int j : I)
            den += std::norm(h.dot(precoders.columns.col(j)));
        return sig / den;
    }

    std::vector<std::vector<double>> decode_rates(const CMat &H, const PrecoderSet &precoders,
                                                  const StreamLayout &layout, const SystemConfig &sys)
    {
        Eigen::MatrixXd G = received_gains(H, precoders);
        std::vector<std::vector<double>> R(layout.num_streams(), std::vector<double>(layout.num_users, 0.0));
        std::vector<double> g;
        for (int k = 0; k < layout.num_users; ++k)
        {
            chain_sinrs(G, layout, sys.noise(k), k, g);
            for (std::size_t i = 0; i < g.size(); ++i)
                R[layout.chains[k][i]][k] = std::log2(1.0 + g[i]);
        }
        return R;
    }

    std::vector<double> caps_from_rates(const std::vector<std::vector<double>> &rates, const StreamLayout &layout)
    {
        std::vector<double> caps(layout.num_streams(), 0.0);
        for (int s = 0; s < layout.num_streams(); ++s)
        {
            double c = std::numeric_limits<double>::infinity();
            for (int k : layout.decoders[s])
                c = std::min(c, rates[s][k]);
            caps[s] = layout.decoders[s].empty() ? 0.0 : c;
        }
        return caps;
    }

    std::vector<double> stream_rate_caps(const CMat &H, const PrecoderSet &precoders, const StreamLayout &layout,
                                         const SystemConfig &sys)
    {
        return caps_from_rates(decode_rates(H, precoders, layout, sys), layout);
    }

    std::vector<double> user_totals(const CommonRateAllocation &alloc, const std::vector<double> &caps,
                                    const StreamLayout &layout)
    {
        std::vector<double> tot(layout.num_users, 0.0);
        for (int s = 0; s < layout.num_streams(); ++s)
        {
            if (layout.is_private(s))
                tot[layout.owners[s][0]] += caps[s];
            else
                for (int k : layout.owners[s])
                    tot[k] += alloc.portions[s][k];
        }
        return tot;
    }

    double FeasibilityReport::worst_slack() const
    {
        double w = std::min(multicast_slack, nonnegativity_slack);
        for (double s : sharing_slack)
            w = std::min(w, s);
        for (double s : qos_slack)
            w = std::min(w, s);
        return w;
    }

    FeasibilityReport validate_allocation(const CommonRateAllocation &alloc, const std::vector<double> &caps,
                                          const QosSpec &qos, const StreamLayout &layout, double tolerance)
    {
        FeasibilityReport rep;
        rep.sharing_slack.assign(layout.num_streams(), std::numeric_limits<double>::infinity());
        rep.nonnegativity_slack = alloc.multicast_portion;
        for (int s = 0; s < layout.num_streams(); ++s)
        {
            if (layout.is_private(s))
                continue;
            double carried = layout.streams[s].carries_multicast ? alloc.multicast_portion : 0.0;
            for (int k : layout.owners[s])
            {
                carried += alloc.portions[s][k];
                rep.nonnegativity_slack = std::min(rep.nonnegativity_slack, alloc.portions[s][k]);
            }
            rep.sharing_slack[s] = caps[s] - carried;
        }
        rep.multicast_slack = alloc.multicast_portion - qos.multicast_threshold;
        std::vector<double> tot = user_totals(alloc, caps, layout);
        rep.qos_slack.resize(layout.num_users);
        for (int k = 0; k < layout.num_users; ++k)
            rep.qos_slack[k] = tot[k] - qos.unicast_thresholds.at(k);
        rep.feasible = rep.worst_slack() >= -tolerance;
        return rep;
    }

    CommonRateAllocation default_allocation(const std::vector<double> &caps, const StreamLayout &layout,
                                            const WeightVector &weights, const QosSpec &qos)
    {
        CommonRateAllocation a = CommonRateAllocation::zeros(layout);
        for (int s = 0; s < layout.num_streams(); ++s)
        {
            if (layout.is_private(s))
                continue;
            double left = std::max(caps[s], 0.0);
            if (layout.streams[s].carries_multicast)
            {
                a.multicast_portion = std::min(qos.multicast_threshold, left);
                left -= a.multicast_portion;
            }
            if (layout.owners[s].empty())
            {
                if (layout.streams[s].carries_multicast)
                    a.multicast_portion += left;
                continue;
            }
            int best = layout.owners[s][0];
            for (int k : layout.owners[s])
                if (weights.unicast_weights[k] > weights.unicast_weights[best])
                    best = k;
            a.portions[s][best] = left;
        }
        return a;
    }

    RateReport report_from_rates(const std::vector<std::vector<double>> &rates, const PrecoderSet &precoders,
                                 const StreamLayout &layout, const CommonRateAllocation &alloc,
                                 const WeightVector &weights, const PowerModel &pm, const SystemConfig &sys)
    {
        RateReport r;
        r.decode_rates = rates;
        r.caps = caps_from_rates(rates, layout);
        r.allocation = alloc;
        r.user_totals = user_totals(alloc, r.caps, layout);
        r.wsr = 0.0;
        for (int k = 0; k < layout.num_users; ++k)
            r.wsr += weights.unicast_weights[k] * r.user_totals[k];
        r.total_power = total_power(precoders, pm, sys);
        double numerator = weights.multicast_weight * alloc.multicast_portion + r.wsr;
        r.ee = numerator / r.total_power;
        return r;
    }

    RateReport report(const CMat &H, const PrecoderSet &precoders, const StreamLayout &layout,
                      const CommonRateAllocation &alloc, const WeightVector &weights, const PowerModel &pm,
                      const SystemConfig &sys)
    {
        return report_from_rates(decode_rates(H, precoders, layout, sys), precoders, layout, alloc, weights, pm, sys);
    }

    std::vector<CMat> evaluation_samples(const ChannelSet &channel)
    {
        if (channel.has_samples())
            return channel.true_samples;
        return {channel.estimated};
    }

    std::vector<std::vector<double>> mean_decode_rates(const std::vector<CMat> &samples, const PrecoderSet &precoders,
                                                       const StreamLayout &layout, const SystemConfig &sys)
    {
        if (samples.empty())
            throw std::invalid_argument("average over an empty sample list");
        std::vector<std::vector<double>> acc(layout.num_streams(), std::vector<double>(layout.num_users, 0.0));
        for (const auto &H : samples)
        {
            auto R = decode_rates(H, precoders, layout, sys);
            for (int s = 0; s < layout.num_streams(); ++s)
                for (int k = 0; k < layout.num_users; ++k)
                    acc[s][k] += R[s][k];
        }
        const double inv = 1.0 / static_cast<double>(samples.size());
        for (auto &row : acc)
            for (double &v : row)
                v *= inv;
        return acc;
    }

    RateReport average_report(const ChannelSet &channel, const PrecoderSet &precoders, const StreamLayout &layout,
                              const CommonRateAllocation &alloc, const WeightVector &weights, const PowerModel &pm,
                              const SystemConfig &sys)
    {
        if (channel.true_samples.empty())
            throw std::invalid_argument("average_report needs at least one channel sample");
        return report_from_rates(mean_decode_rates(channel.true_samples, precoders, layout, sys), precoders, layout,
                                 alloc, weights, pm, sys);
    }

} // namespace noum
