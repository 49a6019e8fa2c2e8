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

// Path-following barrier method with a phase-I search for a strictly feasible point.
// Cones: nonnegative orthant, second-order cone (rotated cones are mapped onto it) and the
// two-argument exponential epigraph y >= exp(u) with barrier -log(log y - u) - log y.

#include "noum/conic.hpp"

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace noum
{
    LinExpr LinExpr::var(int index, double coef)
    {
        LinExpr e;
        e.terms.emplace_back(index, coef);
        return e;
    }

    LinExpr &LinExpr::add(int index, double coef)
    {
        terms.emplace_back(index, coef);
        return *this;
    }

    LinExpr &LinExpr::operator+=(const LinExpr &o)
    {
        terms.insert(terms.end(), o.terms.begin(), o.terms.end());
        constant += o.constant;
        return *this;
    }

    LinExpr &LinExpr::operator-=(const LinExpr &o)
    {
        for (const auto &[i, a] : o.terms)
            terms.emplace_back(i, -a);
        constant -= o.constant;
        return *this;
    }

    LinExpr &LinExpr::operator*=(double a)
    {
        for (auto &t : terms)
            t.second *= a;
        constant *= a;
        return *this;
    }

    LinExpr operator+(LinExpr a, const LinExpr &b) { return a += b; }
    LinExpr operator-(LinExpr a, const LinExpr &b) { return a -= b; }
    LinExpr operator*(double a, LinExpr e) { return e *= a; }

    int ConicProgram::add_variable(const std::string &name, int size, VariableRole role)
    {
        if (size < 1)
            throw std::invalid_argument("variable block '" + name + "' must have positive size");
        for (const auto &b : blocks_)
            if (b.name == name)
                throw std::invalid_argument("duplicate variable block '" + name + "'");
        if (role == VariableRole::model_complex && size % 2 != 0)
            throw std::invalid_argument("complex variable block '" + name + "' needs an even real size");
        blocks_.push_back({name, num_vars_, size, role});
        num_vars_ += size;
        return blocks_.back().offset;
    }

    const VariableBlock &ConicProgram::block(const std::string &name) const
    {
        for (const auto &b : blocks_)
            if (b.name == name)
                return b;
        throw std::out_of_range("no variable block '" + name + "'");
    }

    void ConicProgram::check(const LinExpr &e) const
    {
        if (!std::isfinite(e.constant))
            throw std::invalid_argument("non-finite constant in conic expression");
        for (const auto &[i, a] : e.terms)
        {
            if (i < 0 || i >= num_vars_)
                throw std::invalid_argument("expression references undeclared variable " + std::to_string(i));
            if (!std::isfinite(a))
                throw std::invalid_argument("non-finite coefficient in conic expression");
        }
    }

    void ConicProgram::set_objective(LinExpr objective)
    {
        check(objective);
        objective_ = std::move(objective);
    }

    void ConicProgram::push(ConeType type, std::vector<LinExpr> rows, std::string label)
    {
        for (const auto &r : rows)
            check(r);
        constraints_.push_back({type, std::move(rows), std::move(label)});
    }

    void ConicProgram::add_equality(LinExpr e, std::string label) { push(ConeType::equality, {std::move(e)}, std::move(label)); }

    void ConicProgram::add_nonnegative(LinExpr e, std::string label) { push(ConeType::nonnegative, {std::move(e)}, std::move(label)); }

    void ConicProgram::add_soc(LinExpr t, std::vector<LinExpr> z, std::string label)
    {
        z.insert(z.begin(), std::move(t));
        push(ConeType::soc, std::move(z), std::move(label));
    }

    void ConicProgram::add_rsoc(LinExpr u, LinExpr v, std::vector<LinExpr> z, std::string label)
    {
        z.insert(z.begin(), std::move(v));
        z.insert(z.begin(), std::move(u));
        push(ConeType::rsoc, std::move(z), std::move(label));
    }

    void ConicProgram::add_exponential(LinExpr u, LinExpr y, std::string label)
    {
        push(ConeType::exponential, {std::move(u), std::move(y)}, std::move(label));
    }

    namespace
    {
        std::string expr_text(const LinExpr &e, const std::vector<VariableBlock> &blocks)
        {
            std::map<int, double> merged;
            for (const auto &[i, a] : e.terms)
                merged[i] += a;
            std::ostringstream os;
            os.precision(12);
            bool first = true;
            for (const auto &[i, a] : merged)
            {
                if (a == 0.0)
                    continue;
                std::string name = "x" + std::to_string(i);
                for (const auto &b : blocks)
                    if (i >= b.offset && i < b.offset + b.size)
                        name = b.size == 1 ? b.name : b.name + "[" + std::to_string(i - b.offset) + "]";
                os << (first ? "" : " + ") << a << "*" << name;
                first = false;
            }
            if (e.constant != 0.0 || first)
                os << (first ? "" : " + ") << e.constant;
            return os.str();
        }
    } // namespace

    std::string ConicProgram::dump() const
    {
        std::ostringstream os;
        os << "maximize " << expr_text(objective_, blocks_) << "\n";
        for (const auto &b : blocks_)
            os << "var " << b.name << " size=" << b.size << "\n";
        for (const auto &c : constraints_)
        {
            std::string tag = c.label.empty() ? "" : "[" + c.label + "] ";
            switch (c.type)
            {
            case ConeType::equality:
                os << tag << expr_text(c.rows[0], blocks_) << " == 0\n";
                break;
            case ConeType::nonnegative:
                os << tag << expr_text(c.rows[0], blocks_) << " >= 0\n";
                break;
            case ConeType::soc:
            case ConeType::rsoc:
            {
                std::size_t head = c.type == ConeType::soc ? 1 : 2;
                os << tag << "||(";
                for (std::size_t i = head; i < c.rows.size(); ++i)
                    os << (i > head ? "; " : "") << expr_text(c.rows[i], blocks_);
                os << ")||" << (c.type == ConeType::soc ? " <= " : "^2 <= ") << expr_text(c.rows[0], blocks_);
                if (c.type == ConeType::rsoc)
                    os << " * " << expr_text(c.rows[1], blocks_);
                os << "\n";
                break;
            }
            case ConeType::exponential:
                os << tag << "exp(" << expr_text(c.rows[0], blocks_) << ") <= " << expr_text(c.rows[1], blocks_) << "\n";
                break;
            }
        }
        return os.str();
    }

    int variable_count(const ConicProgram &prog) { return prog.num_variables(); }

    int model_variable_count(const ConicProgram &prog)
    {
        int n = 0;
        for (const auto &b : prog.blocks())
        {
            if (b.role == VariableRole::model_real)
                n += b.size;
            else if (b.role == VariableRole::model_complex)
                n += b.size / 2;
        }
        return n;
    }

    std::string to_string(SolveStatus s)
    {
        switch (s)
        {
        case SolveStatus::optimal:
            return "optimal";
        case SolveStatus::infeasible:
            return "infeasible";
        case SolveStatus::unbounded:
            return "unbounded";
        case SolveStatus::max_iter:
            return "max_iter";
        }
        return "unknown";
    }

    // ------------------------------------------------------------------------
    // Solver internals

    namespace
    {
        using Eigen::MatrixXd;
        using Eigen::VectorXd;

        enum class Kind
        {
            lin,
            soc,
            exp
        };

        struct Block
        {
            Kind kind = Kind::lin;
            std::vector<int> supp; // Columns touched
            MatrixXd M;            // rows x supp
            VectorXd q;
            MatrixXd MJM; // M^T diag(-1, 1, ..., 1) M for second-order cones
            double nu = 1.0;

            VectorXd slack(const VectorXd &x) const
            {
                VectorXd xs(supp.size());
                for (std::size_t j = 0; j < supp.size(); ++j)
                    xs(j) = x(supp[j]);
                return M * xs + q;
            }
        };

        bool interior(const Block &b, const VectorXd &s)
        {
            switch (b.kind)
            {
            case Kind::lin:
                return s(0) > 0.0;
            case Kind::soc:
            {
                double t = s(0);
                double zz = s.tail(s.size() - 1).squaredNorm();
                return t > 0.0 && t * t - zz > 0.0;
            }
            case Kind::exp:
                return s(1) > 0.0 && std::log(s(1)) - s(0) > 0.0;
            }
            return false;
        }

        // Barrier value, gradient and Hessian in slack coordinates.
        double barrier(const Block &b, const VectorXd &s, VectorXd *g, MatrixXd *H)
        {
            switch (b.kind)
            {
            case Kind::lin:
            {
                double v = s(0);
                if (g)
                    (*g) = VectorXd::Constant(1, -1.0 / v);
                if (H)
                    (*H) = MatrixXd::Constant(1, 1, 1.0 / (v * v));
                return -std::log(v);
            }
            case Kind::soc:
            {
                const int r = static_cast<int>(s.size());
                double t = s(0);
                double D = t * t - s.tail(r - 1).squaredNorm();
                if (g || H)
                {
                    VectorXd dD(r);
                    dD(0) = 2.0 * t;
                    dD.tail(r - 1) = -2.0 * s.tail(r - 1);
                    if (g)
                        (*g) = -dD / D;
                    if (H)
                    {
                        (*H) = dD * dD.transpose() / (D * D);
                        (*H)(0, 0) -= 2.0 / D;
                        for (int i = 1; i < r; ++i)
                            (*H)(i, i) += 2.0 / D;
                    }
                }
                return -std::log(D);
            }
            case Kind::exp:
            {
                double u = s(0), y = s(1);
                double rr = std::log(y) - u;
                if (g)
                {
                    (*g).resize(2);
                    (*g)(0) = 1.0 / rr;
                    (*g)(1) = -1.0 / (rr * y) - 1.0 / y;
                }
                if (H)
                {
                    (*H).resize(2, 2);
                    (*H)(0, 0) = 1.0 / (rr * rr);
                    (*H)(0, 1) = (*H)(1, 0) = -1.0 / (rr * rr * y);
                    (*H)(1, 1) = 1.0 / (rr * rr * y * y) + 1.0 / (rr * y * y) + 1.0 / (y * y);
                }
                return -std::log(rr) - std::log(y);
            }
            }
            return 0.0;
        }

        struct Problem
        {
            int n = 0;
            std::vector<Block> blocks;
            MatrixXd A; // Independent equality rows
            VectorXd b;
            VectorXd c; // Maximize c'x
            double nu = 0.0;
            double box = 1e9; // Implicit |x_i| < box keeps every central path well defined
        };

        Block make_block(Kind kind, const std::vector<LinExpr> &rows, int n_extra_col, const std::vector<double> &extra)
        {
            Block blk;
            blk.kind = kind;
            std::map<int, int> col;
            for (const auto &r : rows)
                for (const auto &t : r.terms)
                    col.emplace(t.first, 0);
            if (n_extra_col >= 0)
                col.emplace(n_extra_col, 0);
            int j = 0;
            for (auto &kv : col)
            {
                kv.second = j++;
                blk.supp.push_back(kv.first);
            }
            blk.M = MatrixXd::Zero(static_cast<int>(rows.size()), j);
            blk.q = VectorXd::Zero(static_cast<int>(rows.size()));
            for (std::size_t i = 0; i < rows.size(); ++i)
            {
                for (const auto &t : rows[i].terms)
                    blk.M(i, col[t.first]) += t.second;
                blk.q(i) = rows[i].constant;
                if (n_extra_col >= 0 && extra[i] != 0.0)
                    blk.M(i, col[n_extra_col]) += extra[i];
            }
            blk.nu = kind == Kind::lin ? 1.0 : (kind == Kind::soc ? 2.0 : 3.0);
            if (kind == Kind::soc)
            {
                const auto m = blk.M.rows();
                blk.MJM = blk.M.bottomRows(m - 1).transpose() * blk.M.bottomRows(m - 1) -
                          blk.M.row(0).transpose() * blk.M.row(0);
            }
            return blk;
        }

        // Lowers user constraints to blocks. With phase1_col >= 0, every cone is relaxed by that column.
        Problem lower(const ConicProgram &prog, int phase1_col)
        {
            Problem P;
            P.n = prog.num_variables() + (phase1_col >= 0 ? 1 : 0);
            std::vector<LinExpr> eq;
            for (const auto &c : prog.constraints())
            {
                switch (c.type)
                {
                case ConeType::equality:
                    eq.push_back(c.rows[0]);
                    break;
                case ConeType::nonnegative:
                    P.blocks.push_back(make_block(Kind::lin, c.rows, phase1_col, {1.0}));
                    break;
                case ConeType::soc:
                {
                    std::vector<double> ex(c.rows.size(), 0.0);
                    ex[0] = 1.0;
                    P.blocks.push_back(make_block(Kind::soc, c.rows, phase1_col, ex));
                    break;
                }
                case ConeType::rsoc:
                {
                    // ||z||^2 <= u v  <=>  ||(z, (u-v)/2)|| <= (u+v)/2
                    std::vector<LinExpr> rows;
                    rows.push_back(0.5 * (c.rows[0] + c.rows[1]));
                    for (std::size_t i = 2; i < c.rows.size(); ++i)
                        rows.push_back(c.rows[i]);
                    rows.push_back(0.5 * (c.rows[0] - c.rows[1]));
                    std::vector<double> ex(rows.size(), 0.0);
                    ex[0] = 1.0;
                    P.blocks.push_back(make_block(Kind::soc, rows, phase1_col, ex));
                    break;
                }
                case ConeType::exponential:
                    P.blocks.push_back(make_block(Kind::exp, c.rows, phase1_col, {-1.0, 1.0}));
                    break;
                }
            }
            if (phase1_col >= 0)
            {
                LinExpr lb = LinExpr::var(phase1_col) + LinExpr(1.0);
                P.blocks.push_back(make_block(Kind::lin, {lb}, -1, {}));
            }
            P.nu = 2.0 * P.n;
            for (const auto &b : P.blocks)
                P.nu += b.nu;

            MatrixXd A = MatrixXd::Zero(static_cast<int>(eq.size()), P.n);
            VectorXd b = VectorXd::Zero(static_cast<int>(eq.size()));
            for (std::size_t i = 0; i < eq.size(); ++i)
            {
                for (const auto &t : eq[i].terms)
                    A(i, t.first) += t.second;
                b(i) = -eq[i].constant;
            }
            P.A = A;
            P.b = b;

            P.c = VectorXd::Zero(P.n);
            if (phase1_col >= 0)
                P.c(phase1_col) = -1.0;
            else
                for (const auto &t : prog.objective().terms)
                    P.c(t.first) += t.second;
            return P;
        }

        // Drops dependent equality rows; returns false when the system is inconsistent.
        bool reduce_equalities(Problem &P, VectorXd &x0)
        {
            x0 = VectorXd::Zero(P.n);
            if (P.A.rows() == 0)
                return true;
            Eigen::ColPivHouseholderQR<MatrixXd> qr(P.A.transpose());
            qr.setThreshold(1e-12);
            const int r = static_cast<int>(qr.rank());
            MatrixXd A(r, P.n);
            VectorXd b(r);
            auto perm = qr.colsPermutation().indices();
            for (int i = 0; i < r; ++i)
            {
                A.row(i) = P.A.row(perm(i));
                b(i) = P.b(perm(i));
            }
            Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(P.A);
            x0 = cod.solve(P.b);
            double scale = 1.0 + P.b.cwiseAbs().maxCoeff();
            if ((P.A * x0 - P.b).cwiseAbs().maxCoeff() > 1e-9 * scale)
                return false;
            P.A = A;
            P.b = b;
            return true;
        }

        bool all_interior(const Problem &P, const VectorXd &x)
        {
            if (x.cwiseAbs().maxCoeff() >= P.box)
                return false;
            for (const auto &b : P.blocks)
                if (!interior(b, b.slack(x)))
                    return false;
            return true;
        }

        double min_slack(const Problem &P, const VectorXd &x)
        {
            double m = std::numeric_limits<double>::infinity();
            for (const auto &b : P.blocks)
            {
                VectorXd s = b.slack(x);
                switch (b.kind)
                {
                case Kind::lin:
                    m = std::min(m, s(0));
                    break;
                case Kind::soc:
                    m = std::min(m, s(0) - s.tail(s.size() - 1).norm());
                    break;
                case Kind::exp:
                    m = std::min(m, s(1) - std::exp(s(0)));
                    break;
                }
            }
            return m;
        }

        // -tau c'x plus every barrier term; infinity outside the domain.
        double merit(const Problem &P, const VectorXd &x, double tau)
        {
            if (!all_interior(P, x))
                return std::numeric_limits<double>::infinity();
            double f = -tau * P.c.dot(x);
            for (int i = 0; i < P.n; ++i)
                f -= std::log(P.box - x(i)) + std::log(P.box + x(i));
            for (const auto &b : P.blocks)
                f += barrier(b, b.slack(x), nullptr, nullptr);
            return f;
        }

        struct Centering
        {
            bool ok = true;
            bool converged = false;
            bool unbounded = false;
            bool floor = false; // Stuck at the rounding floor before reaching the center
            int steps = 0;
        };

        // True when d is a direction of recession of every cone and of the equalities.
        bool recession(const Problem &P, const VectorXd &d)
        {
            const double scale = d.cwiseAbs().maxCoeff();
            if (scale == 0.0)
                return false;
            const double eps = 1e-13 * scale;
            if (P.A.rows() && (P.A * d).cwiseAbs().maxCoeff() > eps * (1.0 + P.A.cwiseAbs().maxCoeff()))
                return false;
            for (const auto &b : P.blocks)
            {
                VectorXd ds(b.supp.size());
                for (std::size_t j = 0; j < b.supp.size(); ++j)
                    ds(j) = d(b.supp[j]);
                VectorXd m = b.M * ds;
                double tol = eps * (1.0 + b.M.cwiseAbs().maxCoeff());
                switch (b.kind)
                {
                case Kind::lin:
                    if (m(0) < -tol)
                        return false;
                    break;
                case Kind::soc:
                    if (m(0) - m.tail(m.size() - 1).norm() < -tol)
                        return false;
                    break;
                case Kind::exp:
                    if (m(0) > tol || m(1) < -tol)
                        return false;
                    break;
                }
            }
            return true;
        }

        // Damped Newton on tau*(-c'x) + sum(barrier) subject to A x = b.
        Centering center(const Problem &P, VectorXd &x, double tau, int max_steps, const std::function<bool(const VectorXd &)> &stop_early,
                         bool verbose)
        {
            Centering out;
            const int n = P.n;
            const int p = static_cast<int>(P.A.rows());
            VectorXd g(n), gs, dx(n);
            MatrixXd H(n, n), Hs;
            double best_lambda = std::numeric_limits<double>::infinity();
            int stalls = 0, tiny = 0;
            for (int it = 0; it < max_steps; ++it)
            {
                g = -tau * P.c;
                H.setZero();
                for (int i = 0; i < n; ++i)
                {
                    double a = 1.0 / (P.box - x(i)), b = 1.0 / (P.box + x(i));
                    g(i) += a - b;
                    H(i, i) += a * a + b * b;
                }
                for (const auto &b : P.blocks)
                {
                    VectorXd s = b.slack(x);
                    MatrixXd Hb;
                    VectorXd gb;
                    if (b.kind == Kind::soc)
                    {
                        barrier(b, s, &gs, nullptr);
                        double t = s(0);
                        double D = t * t - s.tail(s.size() - 1).squaredNorm();
                        gb = b.M.transpose() * gs;
                        Hb = gb * gb.transpose() + (2.0 / D) * b.MJM;
                    }
                    else
                    {
                        barrier(b, s, &gs, &Hs);
                        gb = b.M.transpose() * gs;
                        Hb = b.M.transpose() * Hs * b.M;
                    }
                    for (std::size_t i = 0; i < b.supp.size(); ++i)
                    {
                        g(b.supp[i]) += gb(i);
                        for (std::size_t j = 0; j < b.supp.size(); ++j)
                            H(b.supp[i], b.supp[j]) += Hb(i, j);
                    }
                }
                Eigen::LLT<MatrixXd> llt(H);
                if (llt.info() != Eigen::Success)
                {
                    H.diagonal().array() += 1e-13 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
                    llt.compute(H);
                }
                if (llt.info() != Eigen::Success)
                {
                    out.ok = false;
                    return out;
                }
                VectorXd r = p ? VectorXd(P.b - P.A * x) : VectorXd();
                if (p)
                {
                    MatrixXd HiAt = llt.solve(P.A.transpose());
                    VectorXd Hig = llt.solve(g);
                    MatrixXd S = P.A * HiAt;
                    Eigen::LDLT<MatrixXd> ldlt(S);
                    VectorXd nu = ldlt.solve(-P.A * Hig - r);
                    dx = -Hig - HiAt * nu;
                }
                else
                    dx = llt.solve(-g);

                double lambda2 = std::max(0.0, dx.dot(H * dx));
                double lambda = std::sqrt(lambda2);
                if (lambda > 1.0 && P.c.dot(dx) > 0.0 && recession(P, dx))
                {
                    out.unbounded = true;
                    return out;
                }
                ++out.steps;
                const bool feasible_newton = !p || r.cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + P.b.cwiseAbs().maxCoeff());
                double alpha = 1.0;
                VectorXd xn = x + dx;
                int bt = 0;
                if (feasible_newton)
                {
                    // Backtracking on the centering objective.
                    const double f0 = merit(P, x, tau), slope = g.dot(dx);
                    while (bt < 60 && (!all_interior(P, xn) || !(merit(P, xn, tau) <= f0 + 0.25 * alpha * slope)))
                    {
                        alpha *= 0.5;
                        xn = x + alpha * dx;
                        ++bt;
                    }
                }
                else
                {
                    alpha = lambda > 0.25 ? 1.0 / (1.0 + lambda) : 1.0;
                    xn = x + alpha * dx;
                    while (!all_interior(P, xn) && bt < 60)
                    {
                        alpha *= 0.5;
                        xn = x + alpha * dx;
                        ++bt;
                    }
                }
                if (bt == 60)
                {
                    // Rounding floor: no decrease is measurable any more.
                    out.converged = std::min(lambda, best_lambda) < 1.0;
                    out.floor = !out.converged;
                    break;
                }
                x = xn;
                if (stop_early && stop_early(x))
                    return out;
                bool residual_small = !p || r.cwiseAbs().maxCoeff() <= 1e-10 * (1.0 + P.b.cwiseAbs().maxCoeff());
                if (verbose)
                    std::fprintf(stderr, "  tau=%.3e step=%d lambda=%.3e alpha=%.3e\n", tau, it, lambda, alpha);
                if (lambda < 1e-6 && residual_small)
                {
                    out.converged = true;
                    break;
                }
                // Rounding floor of the barrier near the boundary: lambda stops shrinking.
                best_lambda = std::min(best_lambda, lambda);
                if (best_lambda < 1.0 && residual_small && alpha < 1e-3)
                {
                    out.converged = true;
                    break;
                }
                tiny = alpha < 1e-3 ? tiny + 1 : 0;
                if (tiny >= 20)
                {
                    out.floor = true;
                    break;
                }
                if (best_lambda < 1.0 && lambda > 0.5 * best_lambda && residual_small)
                {
                    if (++stalls >= 4)
                    {
                        out.converged = true;
                        break;
                    }
                }
                else
                    stalls = 0;
            }
            return out;
        }

        ConicSolution finish(const ConicProgram &prog, const Problem &P, const VectorXd &x, SolveStatus status,
                             double gap, int steps)
        {
            ConicSolution sol;
            sol.status = status;
            sol.x = x.head(prog.num_variables());
            sol.objective = prog.objective().constant;
            for (const auto &t : prog.objective().terms)
                sol.objective += t.second * sol.x(t.first);
            sol.primal_residual = P.A.rows() ? (P.A * x.head(P.n) - P.b).cwiseAbs().maxCoeff() : 0.0;
            sol.min_slack = P.blocks.empty() ? 0.0 : min_slack(P, x.head(P.n));
            sol.gap = gap;
            sol.newton_steps = steps;
            return sol;
        }
    } // namespace

    ConicSolution solve(const ConicProgram &prog, double tol, const SolverOptions &opt)
    {
        if (!(tol > 0.0))
            throw std::invalid_argument("solver tolerance must be positive");
        const int n = prog.num_variables();
        Problem P = lower(prog, -1);
        VectorXd x0;
        if (!reduce_equalities(P, x0))
            return finish(prog, P, VectorXd::Zero(n), SolveStatus::infeasible, 0.0, 0);

        if (P.blocks.empty())
        {
            // Pure equality program: bounded only when c lies in the row space of A.
            VectorXd proj = P.c;
            if (P.A.rows())
            {
                Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(P.A.transpose());
                proj = P.c - P.A.transpose() * cod.solve(P.c);
            }
            SolveStatus st = proj.cwiseAbs().maxCoeff() > 1e-12 * (1.0 + P.c.norm()) ? SolveStatus::unbounded : SolveStatus::optimal;
            return finish(prog, P, x0, st, 0.0, 0);
        }

        int steps = 0;
        VectorXd x = x0;
        if (!all_interior(P, x))
        {
            // Phase I: minimize s subject to every cone relaxed by s, stop once s < 0.
            Problem Q = lower(prog, n);
            VectorXd xq;
            reduce_equalities(Q, xq);
            xq.head(n) = x0;
            xq(n) = 0.0;
            double need = 1.0;
            for (const auto &b : P.blocks)
            {
                VectorXd s = b.slack(x0);
                if (b.kind == Kind::lin)
                    need = std::max(need, -s(0));
                else if (b.kind == Kind::soc)
                    need = std::max(need, s.tail(s.size() - 1).norm() - s(0));
                else
                    need = std::max(need, std::max(-s(1), s(0)));
            }
            xq(n) = 2.0 * need + 1.0;
            while (!all_interior(Q, xq))
                xq(n) *= 2.0;

            // Aim for a point with unit margin; settle for the phase-I optimum when the interior is thinner.
            double tau = 1.0;
            bool found = false;
            auto early = [&](const VectorXd &v) { return v(n) < -0.5; };
            for (int outer = 0; outer < 200 && steps < opt.max_newton_steps; ++outer)
            {
                Centering c = center(Q, xq, tau, 50, early, opt.verbose);
                steps += c.steps;
                if (!c.ok)
                    break;
                double gap = Q.nu / tau;
                if (xq(n) < -0.5 || (xq(n) < 0.0 && (gap < -0.1 * xq(n) || gap < 1e-12)))
                {
                    found = true;
                    break;
                }
                if (!c.converged)
                {
                    if (c.floor)
                        break;
                    continue;
                }
                if (xq(n) - gap > 0.0)
                    break;
                if (gap < 1e-12)
                    break;
                tau *= opt.barrier_growth;
            }
            if (!found)
                return finish(prog, P, xq.head(n), SolveStatus::infeasible, 0.0, steps);
            x = xq.head(n);
        }

        double obj0 = std::abs(P.c.dot(x));
        double tau = 1.0;
        VectorXd x_ok;
        double gap_ok = std::numeric_limits<double>::infinity();
        for (int outer = 0; outer < 200; ++outer)
        {
            Centering c = center(P, x, tau, 300, nullptr, opt.verbose);
            steps += c.steps;
            double obj = P.c.dot(x);
            if (c.unbounded || !std::isfinite(obj) || obj > 1e15 * (1.0 + obj0))
                return finish(prog, P, x, SolveStatus::unbounded, 0.0, steps);
            double gap = P.nu / tau;
            if (c.converged)
            {
                x_ok = x;
                gap_ok = gap;
                if (gap <= tol * std::max(1.0, std::abs(obj)))
                    return finish(prog, P, x, SolveStatus::optimal, gap, steps);
                tau *= opt.barrier_growth;
                continue;
            }
            // The last centered point stands in when the next stage cannot be centered.
            if (x_ok.size() && gap_ok <= 100.0 * tol * std::max(1.0, std::abs(P.c.dot(x_ok))))
                return finish(prog, P, x_ok, SolveStatus::optimal, gap_ok, steps);
            if (!c.ok || c.floor || steps >= opt.max_newton_steps)
                return finish(prog, P, x_ok.size() ? x_ok : x, SolveStatus::max_iter, gap_ok, steps);
        }
        return finish(prog, P, x, SolveStatus::max_iter, P.nu / tau, steps);
    }

} // namespace noum
