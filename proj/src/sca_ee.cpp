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

#include "noum/sca_ee.hpp"

#include "noum/rates.hpp"
#include "noum/scenarios.hpp"
#include "precoder_vars.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace noum
{
    namespace
    {
        using Vars = detail::PrecoderVars;

        // Home stream of each user, -1 when the user owns nothing.
        std::vector<int> home_streams(const StreamLayout &L)
        {
            std::vector<int> home(L.num_users, -1);
            for (int k = 0; k < L.num_users; ++k)
            {
                for (int s = 0; s < L.num_streams() && home[k] < 0; ++s)
                    if (L.is_private(s) && L.owners[s][0] == k)
                        home[k] = s;
                for (int s = 0; s < L.num_streams() && home[k] < 0; ++s)
                    if (!L.streams[s].carries_multicast && L.owners[s].size() == 1 && L.owners[s][0] == k)
                        home[k] = s;
                const auto &o = L.owners[L.multicast_stream];
                if (home[k] < 0 && std::find(o.begin(), o.end(), k) != o.end())
                    home[k] = L.multicast_stream;
            }
            return home;
        }

        bool decodes_with_signal(const CMat &H, const PrecoderSet &P, int k, int s)
        {
            return std::norm(H.col(k).dot(P.columns.col(s))) > 0.0;
        }
    } // namespace

    CommonRateAllocation home_allocation(const std::vector<double> &caps, const StreamLayout &layout,
                                         const QosSpec &qos, const WeightVector &weights)
    {
        CommonRateAllocation a = CommonRateAllocation::zeros(layout);
        const int mc = layout.multicast_stream;
        a.multicast_portion = layout.owners[mc].empty() ? std::max(caps[mc], 0.0) : qos.multicast_threshold;
        std::vector<int> home = home_streams(layout);
        for (int k = 0; k < layout.num_users; ++k)
            if (home[k] >= 0 && !layout.is_private(home[k]))
                a.portions[home[k]][k] += qos.unicast_thresholds.at(k);
        for (int s = 0; s < layout.num_streams(); ++s)
        {
            if (layout.is_private(s) || layout.owners[s].empty())
                continue;
            double carried = layout.streams[s].carries_multicast ? a.multicast_portion : 0.0;
            for (int k : layout.owners[s])
                carried += a.portions[s][k];
            const double left = caps[s] - carried;
            if (left <= 0)
                continue;
            int best = layout.owners[s][0];
            for (int k : layout.owners[s])
                if (weights.unicast_weights.at(k) > weights.unicast_weights.at(best))
                    best = k;
            a.portions[s][best] += left;
        }
        return a;
    }

    FeasibleStart init_feasible(const StrategyConfig &strategy, const StreamLayout &layout, const CMat &H,
                                const QosSpec &qos, const SystemConfig &sys, const WeightVector &weights)
    {
        FeasibleStart out;
        const int S = layout.num_streams();
        const int K = layout.num_users;
        const int nt = sys.num_tx_antennas;
        const int mc = layout.multicast_stream;

        auto accept = [&](const PrecoderSet &P)
        {
            std::vector<double> caps = stream_rate_caps(H, P, layout, sys);
            CommonRateAllocation a = home_allocation(caps, layout, qos, weights);
            if (!validate_allocation(a, caps, qos, layout, 0.0).feasible)
                return false;
            out.feasible = true;
            out.precoders = P;
            out.allocation = a;
            return true;
        };

        PrecoderSet P0 = default_precoders(strategy, layout, H, sys);
        if (accept(P0))
            return out;

        // The multicast stream is decoded by everyone, so its threshold is capped by the weakest user alone.
        for (int k : layout.decoders[mc])
            if (qos.multicast_threshold > std::log2(1.0 + sys.power_budget * H.col(k).squaredNorm() / sys.noise(k)))
                return out;

        std::vector<int> home = home_streams(layout);
        std::vector<double> target(S, 0.0);
        if (layout.streams[mc].carries_multicast)
            target[mc] = qos.multicast_threshold;
        for (int k = 0; k < K; ++k)
        {
            if (home[k] < 0)
            {
                if (qos.unicast_thresholds.at(k) > 0)
                    return out;
                continue;
            }
            target[home[k]] += qos.unicast_thresholds.at(k);
        }

        PrecoderSet mrt = PrecoderSet::zeros(nt, S);
        for (int s = 0; s < S; ++s)
            mrt.columns.col(s) = H.col(layout.decoders[s].front());
        for (const PrecoderSet *ref : {&P0, &mrt})
            for (double margin : {1e-3, 0.0})
            {
                ConicProgram prog;
                Vars v{prog.add_variable("P", 2 * nt * S, VariableRole::model_complex), nt};
                const int r = prog.add_variable("r");
                prog.add_soc(LinExpr::var(r), v.all(S), "norm");
                prog.add_nonnegative(LinExpr(std::sqrt(sys.power_budget)) - LinExpr::var(r), "power");
                for (int s = 0; s < S; ++s)
                {
                    const double rate = target[s] + margin;
                    if (rate <= 0)
                        continue;
                    const double gamma = std::exp2(rate) - 1.0;
                    for (int k : layout.decoders[s])
                    {
                        const CVec h = H.col(k);
                        const double phase = std::arg(h.dot(ref->columns.col(s)));
                        auto [re, im] = v.inner(std::polar(1.0, phase) * h, s);
                        (void)im;
                        std::vector<LinExpr> z;
                        for (int j : layout.interferers(k, s))
                        {
                            auto [jr, ji] = v.inner(h, j);
                            z.push_back(jr);
                            z.push_back(ji);
                        }
                        z.push_back(LinExpr(std::sqrt(sys.noise(k))));
                        prog.add_soc((1.0 / std::sqrt(gamma)) * re, z, "sinr");
                    }
                }
                prog.set_objective(-1.0 * LinExpr::var(r));
                ConicSolution sol = solve(prog, 1e-9);
                if (!detail::usable(sol))
                    continue;
                PrecoderSet P = v.extract(sol.x, S);
                const double pw = P.trace_power();
                if (pw > 0)
                    P.columns *= std::sqrt(sys.power_budget / pw);
                if (accept(P))
                    return out;
            }
        return out;
    }

    ScaState init_auxiliaries(const PrecoderSet &precoders, const CommonRateAllocation &allocation, const CMat &H,
                              const StreamLayout &layout, const WeightVector &weights, const PowerModel &pm,
                              const SystemConfig &sys)
    {
        ScaState st;
        st.precoders = precoders;
        st.allocation = allocation;
        RateReport rep = report(H, precoders, layout, allocation, weights, pm, sys);
        const double num = weights.multicast_weight * allocation.multicast_portion + rep.wsr;
        st.omega = std::sqrt(std::max(num, 0.0));
        st.z = rep.total_power;
        st.t = st.omega * st.omega / st.z;
        Eigen::MatrixXd G = received_gains(H, precoders);
        const int K = layout.num_users;
        st.alpha.assign(K, {});
        st.vartheta.assign(K, {});
        st.beta.assign(K, {});
        for (int k = 0; k < K; ++k)
            for (int s : layout.chains[k])
            {
                double beta = sys.noise(k);
                for (int j : layout.interferers(k, s))
                    beta += G(k, j);
                const double g = G(k, s) / beta;
                st.beta[k].push_back(beta);
                st.vartheta[k].push_back(1.0 + g);
                st.alpha[k].push_back(std::log2(1.0 + g));
            }
        return st;
    }

    RatioTangent linearize_ratio(double omega_n, double z_n)
    {
        if (!(z_n > 0))
            throw std::invalid_argument("ratio expansion point needs z > 0");
        return {2.0 * omega_n / z_n, -(omega_n / z_n) * (omega_n / z_n)};
    }

    QuadOverLinearTangent linearize_quadratic_over_linear(const CVec &p_n, double beta_n, const CVec &h)
    {
        if (!(beta_n > 0))
            throw std::invalid_argument("quadratic-over-linear expansion point needs beta > 0");
        const cplx a = h.dot(p_n);
        QuadOverLinearTangent t;
        t.c = h * (a / beta_n);
        t.d = std::norm(a) / (beta_n * beta_n);
        return t;
    }

    EeSubproblem assemble_ee_subproblem(const StreamLayout &layout, const EeInstance &inst, const ScaState &state)
    {
        const SystemConfig &sys = inst.sys;
        const PowerModel &pm = inst.power_model;
        const int S = layout.num_streams();
        const int K = layout.num_users;
        const int nt = sys.num_tx_antennas;
        const int mc = layout.multicast_stream;
        const CMat &H = inst.H;
        const PrecoderSet &Pn = state.precoders;

        EeSubproblem sub;
        ConicProgram &prog = sub.program;
        Vars v{prog.add_variable("P", 2 * nt * S, VariableRole::model_complex), nt};
        sub.precoder_offset = v.offset;

        std::vector<char> active(S, 0);
        for (int s = 0; s < S; ++s)
            for (int k : layout.decoders[s])
                if (decodes_with_signal(H, Pn, k, s))
                    active[s] = 1;

        // Multicast portion: a variable unless held fixed or its stream is silent.
        LinExpr c0;
        if (!inst.fix_multicast_portion && active[mc])
        {
            sub.multicast_index = prog.add_variable("C0", 1, VariableRole::model_real);
            c0 = LinExpr::var(sub.multicast_index);
        }
        else
            c0 = LinExpr(inst.fix_multicast_portion ? inst.qos.multicast_threshold : 0.0);

        sub.portion_index.assign(S, std::vector<int>(K, -1));
        for (int s = 0; s < S; ++s)
        {
            if (layout.is_private(s) || !active[s])
                continue;
            const bool counted = layout.streams[s].carries_multicast || layout.owners[s].size() >= 2;
            for (int k : layout.owners[s])
                sub.portion_index[s][k] = prog.add_variable("c_" + layout.streams[s].name() + "_" + std::to_string(k + 1),
                                                            1, counted ? VariableRole::model_real : VariableRole::auxiliary);
        }
        sub.omega_index = prog.add_variable("omega");
        sub.z_index = prog.add_variable("z");
        sub.t_index = prog.add_variable("t");
        sub.alpha_index.assign(K, {});
        sub.vartheta_index.assign(K, {});
        sub.beta_index.assign(K, {});
        for (int k = 0; k < K; ++k)
            for (int s : layout.chains[k])
            {
                const bool on = active[s] && decodes_with_signal(H, Pn, k, s);
                const std::string tag = layout.streams[s].name() + "_" + std::to_string(k + 1);
                sub.alpha_index[k].push_back(on ? prog.add_variable("alpha_" + tag) : -1);
                sub.vartheta_index[k].push_back(on ? prog.add_variable("vartheta_" + tag) : -1);
                sub.beta_index[k].push_back(on ? prog.add_variable("beta_" + tag) : -1);
            }

        const LinExpr omega = LinExpr::var(sub.omega_index);
        const LinExpr z = LinExpr::var(sub.z_index);
        const LinExpr t = LinExpr::var(sub.t_index);
        const double pcir = pm.circuit_power(nt);

        // t <= Omega(omega, z)
        RatioTangent rt = linearize_ratio(std::max(state.omega, 1e-9), state.z);
        prog.add_nonnegative(rt.a_omega * omega + rt.a_z * z - t, "ratio");

        // Power: ||P||^2 <= eta (z - P_cir), ||P||^2 <= Pt, z bounded by the largest possible consumption.
        prog.add_rsoc(pm.amplifier_efficiency * (z - LinExpr(pcir)), LinExpr(1.0), v.all(S), "consumption");
        prog.add_soc(LinExpr(std::sqrt(sys.power_budget)), v.all(S), "power");
        prog.add_nonnegative(LinExpr(sys.power_budget / pm.amplifier_efficiency + pcir + 1.0) - z, "z_cap");

        // Rate of each user and the weighted numerator.
        LinExpr numerator = inst.weights.multicast_weight * c0;
        for (int k = 0; k < K; ++k)
        {
            LinExpr total;
            for (std::size_t l = 0; l < layout.chains[k].size(); ++l)
            {
                const int s = layout.chains[k][l];
                if (layout.is_private(s))
                {
                    if (sub.alpha_index[k][l] >= 0)
                        total += LinExpr::var(sub.alpha_index[k][l]);
                }
                else if (sub.portion_index[s][k] >= 0)
                    total += LinExpr::var(sub.portion_index[s][k]);
            }
            numerator += inst.weights.unicast_weights.at(k) * total;
            const double th = inst.qos.unicast_thresholds.at(k);
            if (!total.terms.empty())
                prog.add_nonnegative(total - LinExpr(th), "qos_" + std::to_string(k + 1));
            else if (th > 0)
                prog.add_nonnegative(LinExpr(-th), "qos_" + std::to_string(k + 1));
        }
        prog.add_rsoc(numerator, LinExpr(1.0), {omega}, "numerator");

        if (sub.multicast_index >= 0)
            prog.add_nonnegative(c0 - LinExpr(inst.qos.multicast_threshold), "c0_th");
        else if (!inst.fix_multicast_portion && inst.qos.multicast_threshold > 0)
            prog.add_nonnegative(LinExpr(-inst.qos.multicast_threshold), "c0_th");
        for (int s = 0; s < S; ++s)
            for (int k = 0; k < K; ++k)
                if (sub.portion_index[s][k] >= 0)
                    prog.add_nonnegative(LinExpr::var(sub.portion_index[s][k]), "c_nonneg");

        // Shared streams: carried portions at most every decoder's rate bound.
        for (int s = 0; s < S; ++s)
        {
            if (layout.is_private(s))
                continue;
            LinExpr carried;
            if (layout.streams[s].carries_multicast)
                carried += c0;
            for (int k : layout.owners[s])
                if (sub.portion_index[s][k] >= 0)
                    carried += LinExpr::var(sub.portion_index[s][k]);
            if (carried.terms.empty() && carried.constant <= 0)
                continue;
            for (int k : layout.decoders[s])
            {
                const int l = layout.position(k, s);
                const int a = sub.alpha_index[k][l];
                const std::string tag = layout.streams[s].name() + "_" + std::to_string(k + 1);
                if (a >= 0)
                    prog.add_nonnegative(LinExpr::var(a) - carried, "share_" + tag);
                else
                    prog.add_nonnegative(LinExpr(0.0) - carried, "share_" + tag);
            }
        }

        // Rate, SINR and interference epigraphs of every decoded position.
        for (int k = 0; k < K; ++k)
        {
            const CVec h = H.col(k);
            for (std::size_t l = 0; l < layout.chains[k].size(); ++l)
            {
                const int a = sub.alpha_index[k][l];
                if (a < 0)
                    continue;
                const int s = layout.chains[k][l];
                const int th = sub.vartheta_index[k][l];
                const int b = sub.beta_index[k][l];
                const std::string tag = layout.streams[s].name() + "_" + std::to_string(k + 1);
                prog.add_exponential(std::numbers::ln2 * LinExpr::var(a), LinExpr::var(th), "exp_" + tag);
                prog.add_nonnegative(LinExpr::var(a) + LinExpr(1.0), "alpha_floor_" + tag);

                const double beta_n = std::max(state.beta[k][l], sys.noise(k));
                QuadOverLinearTangent q = linearize_quadratic_over_linear(Pn.columns.col(s), beta_n, h);
                LinExpr psi = 2.0 * v.inner(q.c, s).first - q.d * LinExpr::var(b);
                prog.add_nonnegative(psi - LinExpr::var(th) + LinExpr(1.0), "psi_" + tag);

                std::vector<LinExpr> zi;
                for (int j : layout.interferers(k, s))
                {
                    auto [jr, ji] = v.inner(h, j);
                    zi.push_back(jr);
                    zi.push_back(ji);
                }
                if (zi.empty())
                    prog.add_nonnegative(LinExpr::var(b) - LinExpr(sys.noise(k)), "beta_" + tag);
                else
                    prog.add_rsoc(LinExpr::var(b) - LinExpr(sys.noise(k)), LinExpr(1.0), zi, "beta_" + tag);
                prog.add_nonnegative(LinExpr(sys.noise(k) + h.squaredNorm() * sys.power_budget + 1.0) - LinExpr::var(b),
                                     "beta_cap_" + tag);
            }
        }

        prog.set_objective(t);
        return sub;
    }

    std::string to_string(ScaStatus s)
    {
        switch (s)
        {
        case ScaStatus::converged:
            return "converged";
        case ScaStatus::iteration_cap:
            return "iteration_cap";
        case ScaStatus::infeasible:
            return "infeasible";
        case ScaStatus::numerical_failure:
            return "numerical_failure";
        }
        return "?";
    }

    EeResult sca_solve(const StrategyConfig &strategy, const EeInstance &inst, const AlgorithmConfig &cfg,
                       const PrecoderSet *start, const CommonRateAllocation *start_allocation)
    {
        cfg.validate();
        inst.qos.validate(inst.sys.num_users);
        inst.weights.validate(inst.sys.num_users);
        inst.power_model.validate();
        EeResult res;
        res.strategy = strategy;
        res.layout = stream_layout(strategy, inst.sys);
        const StreamLayout &L = res.layout;
        const int S = L.num_streams();
        const int K = L.num_users;

        auto fits = [&](const PrecoderSet &P, CommonRateAllocation &a)
        {
            if (inst.fix_multicast_portion)
                a.multicast_portion = inst.qos.multicast_threshold;
            if (P.trace_power() > inst.sys.power_budget * (1.0 + 1e-9))
                return false;
            std::vector<double> caps = stream_rate_caps(inst.H, P, L, inst.sys);
            return validate_allocation(a, caps, inst.qos, L, 1e-9).feasible;
        };

        PrecoderSet P;
        CommonRateAllocation a;
        bool ok = false;
        if (start && start_allocation)
        {
            P = *start;
            a = *start_allocation;
            ok = fits(P, a);
        }
        if (!ok)
        {
            FeasibleStart fs = init_feasible(strategy, L, inst.H, inst.qos, inst.sys, inst.weights);
            P = fs.precoders;
            a = fs.allocation;
            ok = fs.feasible && fits(P, a);
        }
        if (!ok)
        {
            res.status = ScaStatus::infeasible;
            res.precoders = PrecoderSet::zeros(inst.sys.num_tx_antennas, S);
            res.allocation = CommonRateAllocation::zeros(L);
            res.report = report(inst.H, res.precoders, L, res.allocation, inst.weights, inst.power_model, inst.sys);
            return res;
        }

        ScaState st = init_auxiliaries(P, a, inst.H, L, inst.weights, inst.power_model, inst.sys);
        res.precoders = P;
        res.allocation = a;
        res.report = report(inst.H, P, L, a, inst.weights, inst.power_model, inst.sys);
        res.trace.push_back(res.report.ee);
        res.status = ScaStatus::iteration_cap;
        const int cap = std::min(cfg.max_iterations, 100);
        for (int n = 1; n <= cap; ++n)
        {
            EeSubproblem sub = assemble_ee_subproblem(L, inst, st);
            ConicSolution sol = solve(sub.program, cfg.solver_tolerance);
            if (!detail::usable(sol))
            {
                res.status = ScaStatus::numerical_failure;
                res.iterations = n - 1;
                return res;
            }
            PrecoderSet Pn = Vars{sub.precoder_offset, inst.sys.num_tx_antennas}.extract(sol.x, S);
            CommonRateAllocation an = CommonRateAllocation::zeros(L);
            an.multicast_portion = sub.multicast_index >= 0
                                       ? std::max(sol.x(sub.multicast_index), 0.0)
                                       : (inst.fix_multicast_portion ? inst.qos.multicast_threshold : 0.0);
            for (int s = 0; s < S; ++s)
                for (int k = 0; k < K; ++k)
                    if (sub.portion_index[s][k] >= 0)
                        an.portions[s][k] = std::max(sol.x(sub.portion_index[s][k]), 0.0);

            const double om = sol.x(sub.omega_index), zz = sol.x(sub.z_index), tt = sol.x(sub.t_index);
            double num = inst.weights.multicast_weight * an.multicast_portion;
            for (int k = 0; k < K; ++k)
            {
                double tot = 0.0;
                for (std::size_t l = 0; l < L.chains[k].size(); ++l)
                {
                    const int s = L.chains[k][l];
                    if (L.is_private(s))
                        tot += sub.alpha_index[k][l] >= 0 ? sol.x(sub.alpha_index[k][l]) : 0.0;
                    else
                        tot += an.portions[s][k];
                }
                num += inst.weights.unicast_weights[k] * tot;
            }
            res.ratio_gap = std::abs(tt - om * om / zz);
            res.numerator_gap = std::abs(om * om - num);
            res.power_gap = std::abs(zz - total_power(Pn, inst.power_model, inst.sys));

            res.precoders = Pn;
            res.allocation = an;
            res.report = report(inst.H, Pn, L, an, inst.weights, inst.power_model, inst.sys);
            res.trace.push_back(res.report.ee);
            res.iterations = n;
            st = init_auxiliaries(Pn, an, inst.H, L, inst.weights, inst.power_model, inst.sys);
            const std::size_t m = res.trace.size();
            const double gaps = std::max({res.ratio_gap, res.numerator_gap, res.power_gap});
            if (std::abs(res.trace[m - 1] - res.trace[m - 2]) < cfg.convergence_tolerance && gaps <= 1e-7)
            {
                res.status = ScaStatus::converged;
                break;
            }
        }
        return res;
    }

    BestEe sca_solve_best(StrategyKind kind, const EeInstance &inst, const AlgorithmConfig &cfg,
                          const std::vector<Seed> &seeds)
    {
        const auto t0 = std::chrono::steady_clock::now();
        BestEe out;
        for (const StrategyConfig &sc : enumerate_orders(kind, inst.sys.num_users))
            out.runs.push_back(sca_solve(sc, inst, cfg));
        for (const Seed &seed : seeds)
        {
            if (seed.strategy.kind != kind)
                throw std::invalid_argument("seed strategy does not match the requested kind");
            EeResult r = sca_solve(seed.strategy, inst, cfg, &seed.precoders, &seed.allocation);
            r.origin = "seed:" + seed.origin;
            out.runs.push_back(std::move(r));
        }
        out.best = out.runs.front();
        for (const auto &r : out.runs)
            if (r.feasible() && (!out.best.feasible() || r.report.ee > out.best.report.ee + 1e-12))
                out.best = r;
        out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

    std::map<StrategyKind, BestEe> solve_ee_strategies(const std::vector<StrategyKind> &kinds, const EeInstance &inst,
                                                       const AlgorithmConfig &cfg)
    {
        auto wanted = [&](StrategyKind k) { return std::find(kinds.begin(), kinds.end(), k) != kinds.end(); };
        const int K = inst.sys.num_users;
        const bool grs = wanted(StrategyKind::GENERALIZED_RS);
        const bool rs = wanted(StrategyKind::ONE_LAYER_RS) || grs;
        const bool mulp = wanted(StrategyKind::MU_LP) || rs;
        const bool scsic = wanted(StrategyKind::SC_SIC) || grs || (rs && K == 2);

        std::map<StrategyKind, BestEe> out;
        auto seed_from = [&](StrategyKind from, StrategyKind to, std::vector<Seed> &seeds)
        {
            const EeResult &b = out.at(from).best;
            if (!b.feasible())
                return;
            StrategyConfig target = enumerate_orders(to, K).front();
            seeds.push_back(map_solution(b.strategy, b.precoders, b.allocation, target, inst.sys));
        };
        if (mulp)
            out[StrategyKind::MU_LP] = sca_solve_best(StrategyKind::MU_LP, inst, cfg);
        if (scsic)
            out[StrategyKind::SC_SIC] = sca_solve_best(StrategyKind::SC_SIC, inst, cfg);
        if (rs)
        {
            std::vector<Seed> seeds;
            seed_from(StrategyKind::MU_LP, StrategyKind::ONE_LAYER_RS, seeds);
            if (K == 2)
                seed_from(StrategyKind::SC_SIC, StrategyKind::ONE_LAYER_RS, seeds);
            out[StrategyKind::ONE_LAYER_RS] = sca_solve_best(StrategyKind::ONE_LAYER_RS, inst, cfg, seeds);
        }
        if (grs)
        {
            std::vector<Seed> seeds;
            seed_from(StrategyKind::ONE_LAYER_RS, StrategyKind::GENERALIZED_RS, seeds);
            seed_from(StrategyKind::SC_SIC, StrategyKind::GENERALIZED_RS, seeds);
            seed_from(StrategyKind::MU_LP, StrategyKind::GENERALIZED_RS, seeds);
            out[StrategyKind::GENERALIZED_RS] = sca_solve_best(StrategyKind::GENERALIZED_RS, inst, cfg, seeds);
        }
        if (wanted(StrategyKind::SC_SIC_PER_GROUP))
            out[StrategyKind::SC_SIC_PER_GROUP] = sca_solve_best(StrategyKind::SC_SIC_PER_GROUP, inst, cfg);
        if (wanted(StrategyKind::OMA))
            out[StrategyKind::OMA] = sca_solve_best(StrategyKind::OMA, inst, cfg);
        for (auto it = out.begin(); it != out.end();)
            it = wanted(it->first) ? std::next(it) : out.erase(it);
        return out;
    }

} // namespace noum
