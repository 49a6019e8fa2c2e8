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

#ifndef NOUM_SCA_EE_HPP
#define NOUM_SCA_EE_HPP

#include "noum/conic.hpp"
#include "noum/model.hpp"

#include <map>
#include <string>
#include <vector>

namespace noum
{
    // Allocation that gives every user its threshold on its home stream (private stream, else the shared stream
    // it alone owns, else the multicast stream), C_0 = R_0^th, and leftover cap to the highest-weight owner.
    CommonRateAllocation home_allocation(const std::vector<double> &caps, const StreamLayout &layout,
                                         const QosSpec &qos, const WeightVector &weights);

    struct FeasibleStart
    {
        bool feasible = false;
        PrecoderSet precoders;
        CommonRateAllocation allocation;
    };

    // QoS-feasible precoders with C_0 = R_0^th. The default precoders are returned when they already satisfy
    // the thresholds; otherwise a phase-rotated second-order-cone feasibility problem is solved and the
    // result is scaled to the full power budget.
    FeasibleStart init_feasible(const StrategyConfig &strategy, const StreamLayout &layout, const CMat &H,
                                const QosSpec &qos, const SystemConfig &sys, const WeightVector &weights);

    struct EeInstance
    {
        CMat H;
        SystemConfig sys;
        WeightVector weights;
        QosSpec qos;
        PowerModel power_model;
        bool fix_multicast_portion = false; // C_0 held at R_0^th
    };

    // Expansion point of one SCA iteration; per-user vectors follow the user's decode chain.
    struct ScaState
    {
        PrecoderSet precoders;
        CommonRateAllocation allocation;
        double omega = 0.0;
        double z = 0.0;
        double t = 0.0;
        std::vector<std::vector<double>> alpha;    // Rate lower bounds
        std::vector<std::vector<double>> vartheta; // 1 + SINR lower bounds
        std::vector<std::vector<double>> beta;     // Interference-plus-noise upper bounds
    };

    // Tight auxiliaries at (P, c): omega^2 = weighted rate sum, z = total power, beta = interference plus
    // noise, alpha = decode rates, vartheta = 1 + SINR, t = omega^2 / z.
    ScaState init_auxiliaries(const PrecoderSet &precoders, const CommonRateAllocation &allocation, const CMat &H,
                              const StreamLayout &layout, const WeightVector &weights, const PowerModel &pm,
                              const SystemConfig &sys);

    // a_omega * omega + a_z * z
    struct RatioTangent
    {
        double a_omega = 0.0;
        double a_z = 0.0;
        double operator()(double omega, double z) const { return a_omega * omega + a_z * z; }
    };

    // Under-estimator of omega^2 / z tangent at (omega_n, z_n). Throws std::invalid_argument when z_n <= 0.
    RatioTangent linearize_ratio(double omega_n, double z_n);

    // 2 Re{c^H p} - d beta
    struct QuadOverLinearTangent
    {
        CVec c;
        double d = 0.0;
        double operator()(const CVec &p, double beta) const { return 2.0 * c.dot(p).real() - d * beta; }
    };

    // Under-estimator of |h^H p|^2 / beta tangent at (p_n, beta_n). Throws std::invalid_argument when beta_n <= 0.
    QuadOverLinearTangent linearize_quadratic_over_linear(const CVec &p_n, double beta_n, const CVec &h);

    struct EeSubproblem
    {
        ConicProgram program;
        int precoder_offset = 0;
        int multicast_index = -1; // -1 when C_0 is held fixed
        std::vector<std::vector<int>> portion_index;
        int omega_index = 0, z_index = 0, t_index = 0;
        std::vector<std::vector<int>> alpha_index, vartheta_index, beta_index; // [user][chain position]
    };

    EeSubproblem assemble_ee_subproblem(const StreamLayout &layout, const EeInstance &inst, const ScaState &state);

    enum class ScaStatus
    {
        converged,
        iteration_cap,
        infeasible,
        numerical_failure
    };

    std::string to_string(ScaStatus s);

    struct EeResult
    {
        StrategyConfig strategy;
        StreamLayout layout;
        PrecoderSet precoders;
        CommonRateAllocation allocation;
        RateReport report;
        std::vector<double> trace; // EE of the start, then of every iterate
        int iterations = 0;
        ScaStatus status = ScaStatus::iteration_cap;
        double ratio_gap = 0.0;     // |t - omega^2 / z| at the last subproblem solution
        double numerator_gap = 0.0; // |omega^2 - weighted rate sum|
        double power_gap = 0.0;     // |z - total power|
        std::string origin = "default";

        bool feasible() const { return status != ScaStatus::infeasible; }
    };

    // Iterations stop when |t^n - t^(n-1)| < tolerance and the three epigraph gaps are below 1e-7, or at the cap.
    EeResult sca_solve(const StrategyConfig &strategy, const EeInstance &inst, const AlgorithmConfig &cfg,
                       const PrecoderSet *start = nullptr, const CommonRateAllocation *start_allocation = nullptr);

    struct BestEe
    {
        EeResult best;
        std::vector<EeResult> runs;
        double wall_seconds = 0.0;
    };

    BestEe sca_solve_best(StrategyKind kind, const EeInstance &inst, const AlgorithmConfig &cfg,
                          const std::vector<Seed> &seeds = {});

    // Same dominance seeding as the WSR driver.
    std::map<StrategyKind, BestEe> solve_ee_strategies(const std::vector<StrategyKind> &kinds, const EeInstance &inst,
                                                       const AlgorithmConfig &cfg);

} // namespace noum

#endif
