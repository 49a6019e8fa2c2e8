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

#ifndef NOUM_RATES_HPP
#define NOUM_RATES_HPP

#include "noum/model.hpp"

#include <vector>

namespace noum
{
    // |h_k^H p_s|^2 for every user (rows) and stream (columns) of one channel sample H (Nt x K).
    Eigen::MatrixXd received_gains(const CMat &H, const PrecoderSet &precoders);

    // SINR of stream at user; throws std::logic_error when the user does not decode the stream.
    double sinr(const CMat &H, const PrecoderSet &precoders, const StreamLayout &layout,
                const SystemConfig &sys, int user, int stream);

    // log2(1 + SINR) for every decoding (stream, user) pair, 0 elsewhere.
    std::vector<std::vector<double>> decode_rates(const CMat &H, const PrecoderSet &precoders,
                                                  const StreamLayout &layout, const SystemConfig &sys);

    // Minimum decode rate over each stream's decoders.
    std::vector<double> caps_from_rates(const std::vector<std::vector<double>> &rates, const StreamLayout &layout);

    std::vector<double> stream_rate_caps(const CMat &H, const PrecoderSet &precoders,
                                         const StreamLayout &layout, const SystemConfig &sys);

    // Per-user R_{k,tot}: owned portions of shared streams plus the caps of the user's private streams.
    std::vector<double> user_totals(const CommonRateAllocation &alloc, const std::vector<double> &caps,
                                    const StreamLayout &layout);

    struct FeasibilityReport
    {
        bool feasible = true;
        std::vector<double> sharing_slack; // Per stream: cap minus carried portions (private streams report +inf)
        double multicast_slack = 0.0;      // C_0 - R_0^th
        std::vector<double> qos_slack;     // R_{k,tot} - R_k^th
        double nonnegativity_slack = 0.0;  // Smallest allocation entry
        double worst_slack() const;
    };

    FeasibilityReport validate_allocation(const CommonRateAllocation &alloc, const std::vector<double> &caps,
                                          const QosSpec &qos, const StreamLayout &layout, double tolerance = 0.0);

    // Greedy allocation used when only precoders are known: C_0 = R_0^th clipped to the cap of the multicast
    // stream, leftover cap of each shared stream to its highest-weight owner (C_0 when there is none).
    CommonRateAllocation default_allocation(const std::vector<double> &caps, const StreamLayout &layout,
                                            const WeightVector &weights, const QosSpec &qos);

    RateReport report_from_rates(const std::vector<std::vector<double>> &rates, const PrecoderSet &precoders,
                                 const StreamLayout &layout, const CommonRateAllocation &alloc,
                                 const WeightVector &weights, const PowerModel &pm, const SystemConfig &sys);

    RateReport report(const CMat &H, const PrecoderSet &precoders, const StreamLayout &layout,
                      const CommonRateAllocation &alloc, const WeightVector &weights, const PowerModel &pm,
                      const SystemConfig &sys);

    // Sample-mean decode rates over channel.true_samples; caps are minima of the mean rates.
    // Throws std::invalid_argument when the sample list is empty.
    RateReport average_report(const ChannelSet &channel, const PrecoderSet &precoders, const StreamLayout &layout,
                              const CommonRateAllocation &alloc, const WeightVector &weights, const PowerModel &pm,
                              const SystemConfig &sys);

    // The samples a solver evaluates: true_samples when present, else the estimate alone.
    std::vector<CMat> evaluation_samples(const ChannelSet &channel);

    std::vector<std::vector<double>> mean_decode_rates(const std::vector<CMat> &samples, const PrecoderSet &precoders,
                                                       const StreamLayout &layout, const SystemConfig &sys);

} // namespace noum

#endif
