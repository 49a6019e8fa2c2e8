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

#ifndef NOUM_WMMSE_HPP
#define NOUM_WMMSE_HPP

#include "noum/conic.hpp"
#include "noum/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace noum
{
    // Everything a WSR solve needs besides the strategy.
    struct WsrInstance
    {
        ChannelSet channel; // Estimate; true_samples present under imperfect CSIT
        SystemConfig sys;
        WeightVector weights;
        QosSpec qos;
        PowerModel power_model; // Only used to fill RateReport::ee
    };

    struct WsrOptions
    {
        std::vector<int> pinned_streams; // Precoders held at zero, their portions at zero
        bool pin_unicast_portions = false; // All unicast portions of shared streams held at zero
    };

    // Closed-form receiver quantities of every (sample, user, chain position).
    struct WmmseState
    {
        std::vector<std::vector<std::vector<cplx>>> g;     // MMSE equalizers
        std::vector<std::vector<std::vector<double>>> w;   // MMSE weights
        std::vector<std::vector<std::vector<double>>> T;   // Signal plus not-yet-cancelled streams plus noise
        std::vector<std::vector<std::vector<double>>> mse; // At the MMSE equalizer
    };

    // p_s^H h T^-1 for the stream at the given chain position of user.
    cplx mmse_equalizer(const CVec &h, const PrecoderSet &precoders, const StreamLayout &layout, int user,
                        int position, double noise);

    struct MseWeight
    {
        double mse = 1.0;
        double weight = 1.0;
        double T = 1.0;
    };

    // mse = |g|^2 T - 2 Re{g h^H p} + 1 and weight = 1 / mse (clipped at weight_clip).
    MseWeight mse_and_weight(cplx g, const CVec &h, const PrecoderSet &precoders, const StreamLayout &layout, int user,
                             int position, double noise, double weight_clip = 1e12);

    // Augmented weighted MSE in bits: (w mse - ln w - 1) / ln 2 + 1. Minimizing over w gives 1 - log2(1/mse).
    double augmented_wmse(double weight, double mse);

    WmmseState wmmse_state(const std::vector<CMat> &samples, const PrecoderSet &precoders, const StreamLayout &layout,
                           const SystemConfig &sys, double weight_clip = 1e12);

    // Max over samples, users and chain positions of |augmented_wmse(w, mse) - (1 - log2(1 + SINR))|.
    double rate_wmmse_identity_check(const WmmseState &state, const std::vector<CMat> &samples,
                                     const PrecoderSet &precoders, const StreamLayout &layout,
                                     const SystemConfig &sys);

    // Convex precoder/allocation subproblem at fixed equalizers and weights.
    struct WsrSubproblem
    {
        ConicProgram program;
        int precoder_offset = 0;                     // Stream s, antenna n: re at offset + 2 (s Nt + n), im next
        int multicast_index = -1;                    // C_0 variable, -1 when the stream has no owners or is pinned
        std::vector<std::vector<int>> portion_index; // [stream][user], -1 where no variable exists
        std::vector<char> active;                    // Per stream: 0 when pinned or carrying no signal
        double objective_scale = 1.0;                // WSR bound = objective / scale + constant
        double objective_constant = 0.0;
    };

    WsrSubproblem assemble_wsr_subproblem(const StreamLayout &layout, const WsrInstance &inst,
                                          const WmmseState &state, const std::vector<CMat> &samples,
                                          const PrecoderSet &current, const WsrOptions &opt = {});

    enum class AoStatus
    {
        converged,
        iteration_cap,
        infeasible,       // First subproblem infeasible: QoS-infeasible instance at this start
        numerical_failure // A later subproblem failed; the last feasible iterate is kept
    };

    std::string to_string(AoStatus s);

    struct WsrResult
    {
        StrategyConfig strategy;
        StreamLayout layout;
        PrecoderSet precoders;
        CommonRateAllocation allocation;
        RateReport report;
        std::vector<double> trace; // WSR after each subproblem, preceded by the start's WSR when it is known
        int iterations = 0;
        AoStatus status = AoStatus::iteration_cap;
        double solver_bound = 0.0;     // Last subproblem optimum as a WSR lower bound
        double identity_violation = 0; // Worst rate/WMMSE identity violation over the iterates
        std::string origin = "default";

        bool feasible() const { return status != AoStatus::infeasible; }
    };

    // Alternating optimization from a given start. When start_allocation is given the start is taken as feasible
    // and is returned unchanged if the first subproblem fails.
    WsrResult ao_solve(const StrategyConfig &strategy, const WsrInstance &inst, const AlgorithmConfig &cfg,
                       const PrecoderSet &start, const CommonRateAllocation *start_allocation = nullptr,
                       const WsrOptions &opt = {});

    // Default precoder start; falls back to a QoS-feasible start when the first subproblem is infeasible.
    WsrResult ao_solve_default(const StrategyConfig &strategy, const WsrInstance &inst, const AlgorithmConfig &cfg,
                               const WsrOptions &opt = {});

    struct BestResult
    {
        WsrResult best;
        std::vector<WsrResult> runs; // Enumerated orders first, seeded runs after
        double wall_seconds = 0.0;
    };

    // Runs every enumerated configuration from the default start plus each seed; ties within 1e-12 go to the
    // earliest run.
    BestResult ao_solve_best(StrategyKind kind, const WsrInstance &inst, const AlgorithmConfig &cfg,
                             const std::vector<Seed> &seeds = {},
                             const std::vector<std::vector<int>> *fixed_partition = nullptr);

    // Solves the requested strategies with dominance seeding between them (MU-LP into 1-layer RS, 1-layer RS,
    // MU-LP and the best SC-SIC order into generalized RS, and the best SC-SIC order into 1-layer RS at K = 2).
    std::map<StrategyKind, BestResult> solve_wsr_strategies(const std::vector<StrategyKind> &kinds,
                                                            const WsrInstance &inst, const AlgorithmConfig &cfg);

} // namespace noum

#endif
