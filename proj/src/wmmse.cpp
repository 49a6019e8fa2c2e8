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

#include "noum/wmmse.hpp"

#include "noum/rates.hpp"
#include "noum/sca_ee.hpp"
#include "noum/scenarios.hpp"
#include "precoder_vars.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace noum
{
    namespace
    {
        // Signal plus every stream the user has not cancelled yet, plus noise.
        double chain_T(const CVec &h, const PrecoderSet &P, const StreamLayout &layout, int user, int position,
                       double noise)
        {
            const int s = layout.chains.at(user).at(position);
            double T = noise + std::norm(h.dot(P.columns.col(s)));
            for (int j : layout.interferers(user, s))
                T += std::norm(h.dot(P.columns.col(j)));
            return T;
        }
    } // namespace

    cplx mmse_equalizer(const CVec &h, const PrecoderSet &precoders, const StreamLayout &layout, int user,
                        int position, double noise)
    {
        const int s = layout.chains.at(user).at(position);
        const double T = chain_T(h, precoders, layout, user, position, noise);
        return std::conj(h.dot(precoders.columns.col(s))) / T;
    }

    MseWeight mse_and_weight(cplx g, const CVec &h, const PrecoderSet &precoders, const StreamLayout &layout, int user,
                             int position, double noise, double weight_clip)
    {
        const int s = layout.chains.at(user).at(position);
        MseWeight r;
        r.T = chain_T(h, precoders, layout, user, position, noise);
        r.mse = std::norm(g) * r.T - 2.0 * (g * h.dot(precoders.columns.col(s))).real() + 1.0;
        r.weight = std::min(1.0 / r.mse, weight_clip);
        return r;
    }

    double augmented_wmse(double weight, double mse)
    {
        return (weight * mse - std::log(weight) - 1.0) / std::numbers::ln2 + 1.0;
    }

    WmmseState wmmse_state(const std::vector<CMat> &samples, const PrecoderSet &precoders, const StreamLayout &layout,
                           const SystemConfig &sys, double weight_clip)
    {
        const int M = static_cast<int>(samples.size());
        const int K = layout.num_users;
        WmmseState st;
        st.g.assign(M, std::vector<std::vector<cplx>>(K));
        st.w.assign(M, std::vector<std::vector<double>>(K));
        st.T = st.w;
        st.mse = st.w;
        for (int m = 0; m < M; ++m)
            for (int k = 0; k < K; ++k)
            {
                const CVec h = samples[m].col(k);
                for (std::size_t l = 0; l < layout.chains[k].size(); ++l)
                {
                    const int pos = static_cast<int>(l);
                    cplx g = mmse_equalizer(h, precoders, layout, k, pos, sys.noise(k));
                    MseWeight mw = mse_and_weight(g, h, precoders, layout, k, pos, sys.noise(k), weight_clip);
                    st.g[m][k].push_back(g);
                    st.w[m][k].push_back(mw.weight);
                    st.T[m][k].push_back(mw.T);
                    st.mse[m][k].push_back(mw.mse);
                }
            }
        return st;
    }

    double rate_wmmse_identity_check(const WmmseState &state, const std::vector<CMat> &samples,
                                     const PrecoderSet &precoders, const StreamLayout &layout,
                                     const SystemConfig &sys)
    {
        double worst = 0.0;
        for (std::size_t m = 0; m < samples.size(); ++m)
            for (int k = 0; k < layout.num_users; ++k)
                for (std::size_t l = 0; l < layout.chains[k].size(); ++l)
                {
                    const int s = layout.chains[k][l];
                    const double R = std::log2(1.0 + sinr(samples[m], precoders, layout, sys, k, s));
                    const double xi = augmented_wmse(state.w[m][k][l], state.mse[m][k][l]);
                    worst = std::max(worst, std::abs(xi - (1.0 - R)));
                }
        return worst;
    }

    namespace
    {
        // sum_s p_s^H A_s p_s - 2 Re{sum_s b_s^H p_s} + c, with A_s = sum of coef h h^H generators.
        struct Quad
        {
            std::vector<std::vector<std::pair<double, CVec>>> gens;
            std::vector<CVec> b;
            double c = 0.0;

            Quad(int S, int nt) : gens(S), b(S, CVec::Zero(nt)) {}

            bool has_precoder_terms() const
            {
                for (std::size_t s = 0; s < gens.size(); ++s)
                    if (!gens[s].empty() || b[s].squaredNorm() > 0)
                        return true;
                return false;
            }

            void add(const Quad &o, double scale)
            {
                for (std::size_t s = 0; s < gens.size(); ++s)
                {
                    for (const auto &gv : o.gens[s])
                        gens[s].push_back({gv.first * scale, gv.second});
                    b[s] += scale * o.b[s];
                }
                c += scale * o.c;
            }
        };

        using Vars = detail::PrecoderVars;

        // Rows f with sum_f |f^H p|^2 = p^H A p.
        std::vector<CVec> factor(const std::vector<std::pair<double, CVec>> &gens, int nt)
        {
            std::vector<CVec> rows;
            int nonzero = 0;
            for (const auto &g : gens)
                if (g.first > 0 && g.second.squaredNorm() > 0)
                    ++nonzero;
            if (nonzero <= nt)
            {
                for (const auto &g : gens)
                    if (g.first > 0 && g.second.squaredNorm() > 0)
                        rows.push_back(std::sqrt(g.first) * g.second);
                return rows;
            }
            CMat A = CMat::Zero(nt, nt);
            for (const auto &g : gens)
                if (g.first > 0)
                    A.noalias() += g.first * g.second * g.second.adjoint();
            Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (A + A.adjoint()));
            const double top = std::max(es.eigenvalues().maxCoeff(), 0.0);
            for (int i = nt - 1; i >= 0; --i)
            {
                const double lam = es.eigenvalues()(i);
                if (lam > 1e-14 * top)
                    rows.push_back(std::sqrt(lam) * es.eigenvectors().col(i));
            }
            return rows;
        }

        // q(P) <= rhs, lowered to ||F p||^2 <= rhs - c + 2 Re{b^H p}.
        void add_quad_le(ConicProgram &prog, const Vars &v, const Quad &q, const LinExpr &rhs, const std::string &label)
        {
            LinExpr u = rhs;
            u.constant -= q.c;
            std::vector<LinExpr> z;
            for (std::size_t s = 0; s < q.gens.size(); ++s)
            {
                const int si = static_cast<int>(s);
                if (q.b[s].squaredNorm() > 0)
                    u += 2.0 * v.inner(q.b[s], si).first;
                for (const CVec &f : factor(q.gens[s], v.nt))
                {
                    auto [r, i] = v.inner(f, si);
                    z.push_back(r);
                    z.push_back(i);
                }
            }
            if (z.empty() && u.terms.empty() && u.constant >= 0)
                return;
            if (z.empty())
                prog.add_nonnegative(u, label);
            else
                prog.add_rsoc(u, LinExpr(1.0), z, label);
        }

        // Sample-averaged augmented WMSE of the stream at a chain position, in bits.
        Quad chain_quad(const StreamLayout &layout, const WmmseState &st, const std::vector<CMat> &samples,
                        const SystemConfig &sys, int k, int pos)
        {
            const int S = layout.num_streams();
            const int nt = sys.num_tx_antennas;
            const int M = static_cast<int>(samples.size());
            const int s = layout.chains[k][pos];
            std::vector<int> T = layout.interferers(k, s);
            T.push_back(s);
            Quad q(S, nt);
            const double inv = 1.0 / (M * std::numbers::ln2);
            for (int m = 0; m < M; ++m)
            {
                const cplx g = st.g[m][k][pos];
                const double w = st.w[m][k][pos];
                const double a = w * inv;
                const CVec h = samples[m].col(k);
                if (std::norm(g) > 0)
                    for (int j : T)
                        q.gens[j].push_back({a * std::norm(g), h});
                q.b[s] += a * std::conj(g) * h;
                q.c += a * (std::norm(g) * sys.noise(k) + 1.0) - (std::log(w) + 1.0) * inv;
            }
            q.c += 1.0;
            return q;
        }

        bool contains(const std::vector<int> &v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }
    } // namespace

    WsrSubproblem assemble_wsr_subproblem(const StreamLayout &layout, const WsrInstance &inst,
                                          const WmmseState &state, const std::vector<CMat> &samples,
                                          const PrecoderSet &current, const WsrOptions &opt)
    {
        const SystemConfig &sys = inst.sys;
        const int S = layout.num_streams();
        const int K = layout.num_users;
        const int nt = sys.num_tx_antennas;
        const int mc = layout.multicast_stream;

        WsrSubproblem sub;
        ConicProgram &prog = sub.program;
        Vars v{prog.add_variable("P", 2 * nt * S, VariableRole::model_complex), nt};
        sub.precoder_offset = v.offset;

        // A stream whose precoder carries no power has zero equalizers everywhere and cannot carry rate in
        // this subproblem.
        sub.active.assign(S, 1);
        for (int s = 0; s < S; ++s)
            if (contains(opt.pinned_streams, s) || current.columns.col(s).squaredNorm() == 0.0)
                sub.active[s] = 0;

        sub.portion_index.assign(S, std::vector<int>(K, -1));
        const bool mc_owned = !layout.owners[mc].empty();
        if (mc_owned && sub.active[mc])
            sub.multicast_index = prog.add_variable("C0", 1, VariableRole::model_real);
        for (int s = 0; s < S; ++s)
        {
            if (layout.is_private(s) || !sub.active[s] || opt.pin_unicast_portions)
                continue;
            const bool counted = layout.streams[s].carries_multicast || layout.owners[s].size() >= 2;
            for (int k : layout.owners[s])
                sub.portion_index[s][k] = prog.add_variable("c_" + layout.streams[s].name() + "_" + std::to_string(k + 1),
                                                            1, counted ? VariableRole::model_real : VariableRole::auxiliary);
        }

        // Power budget.
        prog.add_soc(LinExpr(std::sqrt(sys.power_budget)), v.all(S), "power");
        for (int s : opt.pinned_streams)
            for (int n = 0; n < nt; ++n)
            {
                prog.add_equality(LinExpr::var(v.re(s, n)), "pin");
                prog.add_equality(LinExpr::var(v.im(s, n)), "pin");
            }

        // Multicast threshold and nonnegative portions.
        if (sub.multicast_index >= 0)
            prog.add_nonnegative(LinExpr::var(sub.multicast_index) - LinExpr(inst.qos.multicast_threshold), "c0_th");
        else if (mc_owned && inst.qos.multicast_threshold > 0)
            prog.add_nonnegative(LinExpr(-inst.qos.multicast_threshold), "c0_th");
        for (int s = 0; s < S; ++s)
            for (int k = 0; k < K; ++k)
                if (sub.portion_index[s][k] >= 0)
                    prog.add_nonnegative(LinExpr::var(sub.portion_index[s][k]), "c_nonneg");

        // Per-chain quadratics.
        std::vector<std::vector<Quad>> q(K);
        for (int k = 0; k < K; ++k)
            for (std::size_t l = 0; l < layout.chains[k].size(); ++l)
                q[k].push_back(chain_quad(layout, state, samples, sys, k, static_cast<int>(l)));

        // Shared streams: carried portions at most the rate bound of every decoder.
        for (int s = 0; s < S; ++s)
        {
            if (layout.is_private(s))
                continue;
            LinExpr carried;
            bool any = false;
            if (layout.streams[s].carries_multicast)
            {
                if (sub.multicast_index >= 0)
                {
                    carried += LinExpr::var(sub.multicast_index);
                    any = true;
                }
                else if (!mc_owned)
                {
                    carried += LinExpr(inst.qos.multicast_threshold);
                    any = inst.qos.multicast_threshold > 0;
                }
            }
            for (int k : layout.owners[s])
                if (sub.portion_index[s][k] >= 0)
                {
                    carried += LinExpr::var(sub.portion_index[s][k]);
                    any = true;
                }
            if (!any)
                continue;
            for (int k : layout.decoders[s])
            {
                const int pos = layout.position(k, s);
                LinExpr rhs = LinExpr(1.0) - carried;
                add_quad_le(prog, v, q[k][pos], rhs, "share_" + layout.streams[s].name() + "_" + std::to_string(k + 1));
            }
        }

        // QoS rows: owned portions plus private rate bounds.
        for (int k = 0; k < K; ++k)
        {
            LinExpr owned;
            Quad priv(S, nt);
            int npriv = 0;
            for (std::size_t l = 0; l < layout.chains[k].size(); ++l)
            {
                const int s = layout.chains[k][l];
                if (layout.is_private(s))
                {
                    priv.add(q[k][l], 1.0);
                    ++npriv;
                }
                else if (sub.portion_index[s][k] >= 0)
                    owned += LinExpr::var(sub.portion_index[s][k]);
            }
            const double th = inst.qos.unicast_thresholds.at(k);
            if (npriv == 0)
            {
                if (owned.terms.empty())
                {
                    if (th > 0)
                        prog.add_nonnegative(LinExpr(-th), "qos_" + std::to_string(k + 1));
                }
                else
                    prog.add_nonnegative(owned - LinExpr(th), "qos_" + std::to_string(k + 1));
                continue;
            }
            // priv <= npriv - th + owned
            if (th <= 0 && !priv.has_precoder_terms())
                continue;
            add_quad_le(prog, v, priv, LinExpr(npriv - th) + owned, "qos_" + std::to_string(k + 1));
        }

        // Objective: sum_k u_k (owned portions + sum of private (1 - q)), scaled by the largest weight.
        double umax = 0.0;
        for (double u : inst.weights.unicast_weights)
            umax = std::max(umax, u);
        sub.objective_scale = umax > 0 ? 1.0 / umax : 1.0;
        LinExpr obj;
        Quad epi(S, nt);
        bool need_epi = false;
        sub.objective_constant = 0.0;
        for (int k = 0; k < K; ++k)
        {
            const double u = inst.weights.unicast_weights[k] * sub.objective_scale;
            if (u == 0)
                continue;
            for (std::size_t l = 0; l < layout.chains[k].size(); ++l)
            {
                const int s = layout.chains[k][l];
                if (layout.is_private(s))
                {
                    epi.add(q[k][l], u);
                    sub.objective_constant += inst.weights.unicast_weights[k];
                    need_epi = true;
                }
                else if (sub.portion_index[s][k] >= 0)
                    obj.add(sub.portion_index[s][k], u);
            }
        }
        if (need_epi)
        {
            const int e = prog.add_variable("e", 1, VariableRole::auxiliary);
            add_quad_le(prog, v, epi, LinExpr::var(e), "objective");
            obj.add(e, -1.0);
        }
        prog.set_objective(obj);
        return sub;
    }

    std::string to_string(AoStatus s)
    {
        switch (s)
        {
        case AoStatus::converged:
            return "converged";
        case AoStatus::iteration_cap:
            return "iteration_cap";
        case AoStatus::infeasible:
            return "infeasible";
        case AoStatus::numerical_failure:
            return "numerical_failure";
        }
        return "?";
    }

    namespace
    {
        RateReport evaluate(const std::vector<CMat> &samples, const PrecoderSet &P, const StreamLayout &layout,
                            const CommonRateAllocation &alloc, const WsrInstance &inst)
        {
            return report_from_rates(mean_decode_rates(samples, P, layout, inst.sys), P, layout, alloc, inst.weights,
                                     inst.power_model, inst.sys);
        }
    } // namespace

    WsrResult ao_solve(const StrategyConfig &strategy, const WsrInstance &inst, const AlgorithmConfig &cfg,
                       const PrecoderSet &start, const CommonRateAllocation *start_allocation, const WsrOptions &opt)
    {
        cfg.validate();
        inst.qos.validate(inst.sys.num_users);
        inst.weights.validate(inst.sys.num_users);
        WsrResult res;
        res.strategy = strategy;
        res.layout = stream_layout(strategy, inst.sys);
        const StreamLayout &L = res.layout;
        const std::vector<CMat> samples = evaluation_samples(inst.channel);
        if (start.columns.rows() != inst.sys.num_tx_antennas || start.columns.cols() != L.num_streams())
            throw std::invalid_argument("start precoders do not match the strategy layout");
        if (start.trace_power() > inst.sys.power_budget * (1.0 + 1e-9))
            throw std::invalid_argument("start precoders exceed the power budget");

        PrecoderSet P = start;
        for (int s : opt.pinned_streams)
            P.columns.col(s).setZero();
        res.precoders = P;
        bool have_point = false;
        if (start_allocation)
        {
            RateReport r0 = evaluate(samples, P, L, *start_allocation, inst);
            if (validate_allocation(*start_allocation, r0.caps, inst.qos, L, 1e-9).feasible)
            {
                res.allocation = *start_allocation;
                res.report = r0;
                res.trace.push_back(r0.wsr);
                have_point = true;
            }
        }
        if (!have_point)
        {
            res.allocation = default_allocation(stream_rate_caps(samples[0], P, L, inst.sys), L, inst.weights, inst.qos);
            res.report = evaluate(samples, P, L, res.allocation, inst);
        }

        res.status = AoStatus::iteration_cap;
        for (int n = 1; n <= cfg.max_iterations; ++n)
        {
            WmmseState st = wmmse_state(samples, P, L, inst.sys);
            res.identity_violation = std::max(res.identity_violation,
                                              rate_wmmse_identity_check(st, samples, P, L, inst.sys));
            WsrSubproblem sub = assemble_wsr_subproblem(L, inst, st, samples, P, opt);
            ConicSolution sol = solve(sub.program, cfg.solver_tolerance);
            if (!detail::usable(sol))
            {
                if (!have_point)
                    res.status = sol.status == SolveStatus::infeasible ? AoStatus::infeasible
                                                                         : AoStatus::numerical_failure;
                else
                    res.status = AoStatus::numerical_failure;
                res.iterations = n - 1;
                return res;
            }
            PrecoderSet Pn = detail::PrecoderVars{sub.precoder_offset, inst.sys.num_tx_antennas}.extract(sol.x, L.num_streams());
            CommonRateAllocation a = CommonRateAllocation::zeros(L);
            for (int s = 0; s < L.num_streams(); ++s)
                for (int k = 0; k < L.num_users; ++k)
                    if (sub.portion_index[s][k] >= 0)
                        a.portions[s][k] = std::max(sol.x(sub.portion_index[s][k]), 0.0);
            if (sub.multicast_index >= 0)
                a.multicast_portion = sol.x(sub.multicast_index);
            RateReport rep = evaluate(samples, Pn, L, a, inst);
            if (L.owners[L.multicast_stream].empty())
            {
                a.multicast_portion = rep.caps[L.multicast_stream];
                rep = evaluate(samples, Pn, L, a, inst);
            }
            P = Pn;
            res.precoders = Pn;
            res.allocation = a;
            res.report = rep;
            res.solver_bound = sol.objective / sub.objective_scale + sub.objective_constant;
            res.trace.push_back(rep.wsr);
            res.iterations = n;
            have_point = true;
            const std::size_t m = res.trace.size();
            if (m >= 2 && std::abs(res.trace[m - 1] - res.trace[m - 2]) <= cfg.convergence_tolerance)
            {
                res.status = AoStatus::converged;
                break;
            }
        }
        return res;
    }

    WsrResult ao_solve_default(const StrategyConfig &strategy, const WsrInstance &inst, const AlgorithmConfig &cfg,
                               const WsrOptions &opt)
    {
        StreamLayout L = stream_layout(strategy, inst.sys);
        PrecoderSet P0 = default_precoders(strategy, L, inst.channel.estimated, inst.sys);
        WsrResult r = ao_solve(strategy, inst, cfg, P0, nullptr, opt);
        if (r.status != AoStatus::infeasible || !opt.pinned_streams.empty())
            return r;
        FeasibleStart fs = init_feasible(strategy, L, inst.channel.estimated, inst.qos, inst.sys, inst.weights);
        if (!fs.feasible)
            return r;
        WsrResult r2 = ao_solve(strategy, inst, cfg, fs.precoders, &fs.allocation, opt);
        r2.origin = "qos_start";
        return r2.trace.empty() ? r : r2;
    }

    namespace
    {
        bool better(const WsrResult &a, const WsrResult &b)
        {
            if (!a.feasible())
                return false;
            if (!b.feasible())
                return true;
            return a.report.wsr > b.report.wsr + 1e-12;
        }
    } // namespace

    BestResult ao_solve_best(StrategyKind kind, const WsrInstance &inst, const AlgorithmConfig &cfg,
                             const std::vector<Seed> &seeds, const std::vector<std::vector<int>> *fixed_partition)
    {
        const auto t0 = std::chrono::steady_clock::now();
        BestResult out;
        for (const StrategyConfig &sc : enumerate_orders(kind, inst.sys.num_users, fixed_partition))
            out.runs.push_back(ao_solve_default(sc, inst, cfg));
        for (const Seed &seed : seeds)
        {
            if (seed.strategy.kind != kind)
                throw std::invalid_argument("seed strategy does not match the requested kind");
            WsrResult r = ao_solve(seed.strategy, inst, cfg, seed.precoders, &seed.allocation);
            r.origin = "seed:" + seed.origin;
            out.runs.push_back(std::move(r));
        }
        out.best = out.runs.front();
        for (const auto &r : out.runs)
            if (better(r, out.best))
                out.best = r;
        out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        return out;
    }

    std::map<StrategyKind, BestResult> solve_wsr_strategies(const std::vector<StrategyKind> &kinds,
                                                            const WsrInstance &inst, const AlgorithmConfig &cfg)
    {
        auto wanted = [&](StrategyKind k) { return std::find(kinds.begin(), kinds.end(), k) != kinds.end(); };
        const int K = inst.sys.num_users;
        const bool grs = wanted(StrategyKind::GENERALIZED_RS);
        const bool rs = wanted(StrategyKind::ONE_LAYER_RS) || grs;
        const bool mulp = wanted(StrategyKind::MU_LP) || rs;
        const bool scsic = wanted(StrategyKind::SC_SIC) || grs || (rs && K == 2);

        std::map<StrategyKind, BestResult> out;
        auto seed_from = [&](StrategyKind from, StrategyKind to, std::vector<Seed> &seeds)
        {
            const WsrResult &b = out.at(from).best;
            if (!b.feasible())
                return;
            StrategyConfig target = enumerate_orders(to, K).front();
            seeds.push_back(map_solution(b.strategy, b.precoders, b.allocation, target, inst.sys));
        };
        if (mulp)
            out[StrategyKind::MU_LP] = ao_solve_best(StrategyKind::MU_LP, inst, cfg);
        if (scsic)
            out[StrategyKind::SC_SIC] = ao_solve_best(StrategyKind::SC_SIC, inst, cfg);
        if (rs)
        {
            std::vector<Seed> seeds;
            seed_from(StrategyKind::MU_LP, StrategyKind::ONE_LAYER_RS, seeds);
            if (K == 2)
                seed_from(StrategyKind::SC_SIC, StrategyKind::ONE_LAYER_RS, seeds);
            out[StrategyKind::ONE_LAYER_RS] = ao_solve_best(StrategyKind::ONE_LAYER_RS, inst, cfg, seeds);
        }
        if (grs)
        {
            std::vector<Seed> seeds;
            seed_from(StrategyKind::ONE_LAYER_RS, StrategyKind::GENERALIZED_RS, seeds);
            seed_from(StrategyKind::SC_SIC, StrategyKind::GENERALIZED_RS, seeds);
            seed_from(StrategyKind::MU_LP, StrategyKind::GENERALIZED_RS, seeds);
            out[StrategyKind::GENERALIZED_RS] = ao_solve_best(StrategyKind::GENERALIZED_RS, inst, cfg, seeds);
        }
        if (wanted(StrategyKind::SC_SIC_PER_GROUP))
            out[StrategyKind::SC_SIC_PER_GROUP] = ao_solve_best(StrategyKind::SC_SIC_PER_GROUP, inst, cfg);
        if (wanted(StrategyKind::OMA))
            out[StrategyKind::OMA] = ao_solve_best(StrategyKind::OMA, inst, cfg);
        for (auto it = out.begin(); it != out.end();)
            it = wanted(it->first) ? std::next(it) : out.erase(it);
        return out;
    }

} // namespace noum
