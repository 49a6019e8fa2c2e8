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

#ifndef NOUM_MODEL_HPP
#define NOUM_MODEL_HPP

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace noum
{
    using cplx = std::complex<double>;
    using CVec = Eigen::VectorXcd;
    using CMat = Eigen::MatrixXcd;

    // Users are indexed 0..K-1 throughout the library; names and labels print them 1-based.

    struct SystemConfig
    {
        int num_tx_antennas = 1;           // Nt
        int num_users = 1;                 // K
        std::vector<double> noise_variance; // Per user; empty means 1.0 for everyone
        double power_budget = 1.0;         // Pt in watts

        double noise(int user) const;
        void validate() const;
    };

    struct PowerModel
    {
        double amplifier_efficiency = 0.35;   // eta
        double dynamic_power_per_chain = 0.0; // watts
        double static_power = 0.0;            // watts

        double circuit_power(int num_tx_antennas) const;
        void validate() const;
    };

    // Channel vectors are stored as columns: estimated is Nt x K and column k is h_k.
    // A receiver observes h_k^H x.
    struct ChannelSet
    {
        CMat estimated;
        std::vector<CMat> true_samples;
        std::vector<double> error_covariances;
        std::optional<double> csit_exponent;

        int num_users() const { return static_cast<int>(estimated.cols()); }
        int num_tx_antennas() const { return static_cast<int>(estimated.rows()); }
        bool has_samples() const { return !true_samples.empty(); }
        void validate() const;
    };

    enum class StrategyKind
    {
        MU_LP,
        ONE_LAYER_RS,
        GENERALIZED_RS,
        SC_SIC,
        SC_SIC_PER_GROUP,
        OMA
    };

    std::string to_string(StrategyKind kind);
    StrategyKind parse_strategy_kind(std::string_view name); // throws std::invalid_argument

    struct StrategyConfig
    {
        StrategyKind kind = StrategyKind::MU_LP;
        std::vector<int> decoding_order;             // SC_SIC: permutation of users; empty means identity
        std::vector<std::vector<int>> grouping;      // SC_SIC_PER_GROUP: ordered users of each group; empty means one group
        std::vector<std::vector<int>> subset_order;  // GENERALIZED_RS: intermediate-layer user subsets, larger layers first
        int oma_target_user = 0;                     // OMA

        std::string label() const; // Order/grouping text used in result tables
    };

    struct StreamId
    {
        std::vector<int> intended_users; // Sorted
        bool carries_multicast = false;

        std::string name() const; // "s0" for the multicast stream, otherwise "s" + 1-based users
        bool operator==(const StreamId &) const = default;
    };

    struct StreamLayout
    {
        std::vector<StreamId> streams;
        std::vector<std::vector<int>> chains;   // Per user: stream indices in decode order
        std::vector<std::vector<int>> decoders; // Per stream: users that decode it
        std::vector<std::vector<int>> owners;   // Per stream: users holding a unicast portion of its rate
        int multicast_stream = 0;
        int num_users = 0;

        int num_streams() const { return static_cast<int>(streams.size()); }

        // Single decoder who is also the only owner, not multicast: the rate goes straight to that user.
        bool is_private(int stream) const;

        // Position of stream in user's chain, -1 when the user never decodes it.
        int position(int user, int stream) const;

        // Streams treated as noise while user decodes stream: everything except the stream itself
        // and those strictly earlier in the user's chain.
        std::vector<int> interferers(int user, int stream) const;
    };

    // Throws std::invalid_argument on an invalid order, grouping or target user.
    StreamLayout stream_layout(const StrategyConfig &strategy, const SystemConfig &sys);

    // Columns of P, one per stream of the active layout.
    struct PrecoderSet
    {
        CMat columns; // Nt x S

        double trace_power() const { return columns.squaredNorm(); }
        static PrecoderSet zeros(int num_tx_antennas, int num_streams);
    };

    struct QosSpec
    {
        std::vector<double> unicast_thresholds; // R_k^th
        double multicast_threshold = 0.0;       // R_0^th

        static QosSpec uniform(int num_users, double threshold);
        void validate(int num_users) const;
    };

    struct WeightVector
    {
        double multicast_weight = 0.0;    // u_0
        std::vector<double> unicast_weights; // u_k

        static WeightVector unit(int num_users, double multicast_weight = 0.0);
        void validate(int num_users) const;
    };

    struct CommonRateAllocation
    {
        double multicast_portion = 0.0;             // C_0
        std::vector<std::vector<double>> portions; // [stream][user]; only owners of shared streams are meaningful

        static CommonRateAllocation zeros(const StreamLayout &layout);
    };

    struct RateReport
    {
        std::vector<std::vector<double>> decode_rates; // [stream][user], 0 where the user does not decode
        std::vector<double> caps;                      // Per stream
        CommonRateAllocation allocation;
        std::vector<double> user_totals; // R_{k,tot}
        double wsr = 0.0;
        double total_power = 0.0;
        double ee = 0.0;
    };

    struct AlgorithmConfig
    {
        double convergence_tolerance = 1e-4;
        int max_iterations = 200;
        int csit_sample_count = 100;
        std::uint64_t rng_seed = 0;
        double solver_tolerance = 1e-10; // Duality gap target of each conic subproblem

        void validate() const;
    };

    // A start for one strategy built from another strategy's solution with identical rates.
    struct Seed
    {
        StrategyConfig strategy;
        PrecoderSet precoders;
        CommonRateAllocation allocation;
        std::string origin;
    };

    // Maps src onto target. Streams are matched by intended users; an SC-SIC stream of the i-th user in the
    // order maps to the stream intended for users i..K of the order. Throws std::invalid_argument when the
    // target layout cannot represent the source.
    Seed map_solution(const StrategyConfig &src_strategy, const PrecoderSet &src_precoders,
                      const CommonRateAllocation &src_allocation, const StrategyConfig &target,
                      const SystemConfig &sys);

    // (1/eta) tr(P P^H) + Nt P_dyn + P_sta
    double total_power(const PrecoderSet &precoders, const PowerModel &pm, const SystemConfig &sys);

    // Closed-form model variable counts of the conic subproblems, complex precoder entries counted once.
    int model_variable_count(StrategyKind kind, int num_users, int num_tx_antennas);

    // Stream count of a strategy at K users.
    int stream_count(StrategyKind kind, int num_users);

} // namespace noum

#endif
