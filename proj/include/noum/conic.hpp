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

#ifndef NOUM_CONIC_HPP
#define NOUM_CONIC_HPP

#include <Eigen/Dense>

#include <string>
#include <utility>
#include <vector>

namespace noum
{
    // Sparse affine expression sum_i coef_i * x[index_i] + constant over the program's real variables.
    struct LinExpr
    {
        std::vector<std::pair<int, double>> terms;
        double constant = 0.0;

        LinExpr() = default;
        LinExpr(double c) : constant(c) {}
        static LinExpr var(int index, double coef = 1.0);

        LinExpr &add(int index, double coef);
        LinExpr &operator+=(const LinExpr &o);
        LinExpr &operator-=(const LinExpr &o);
        LinExpr &operator*=(double a);
    };

    LinExpr operator+(LinExpr a, const LinExpr &b);
    LinExpr operator-(LinExpr a, const LinExpr &b);
    LinExpr operator*(double a, LinExpr e);

    enum class VariableRole
    {
        model_real,    // Counted once per scalar in the model variable count
        model_complex, // Interleaved (re, im) pairs, counted once per pair
        auxiliary      // Epigraph and lifting variables, not counted
    };

    enum class ConeType
    {
        equality,    // e == 0
        nonnegative, // e >= 0
        soc,         // ||z|| <= t
        rsoc,        // ||z||^2 <= u v, u >= 0, v >= 0
        exponential  // y >= exp(u)
    };

    struct Constraint
    {
        ConeType type = ConeType::nonnegative;
        std::vector<LinExpr> rows; // equality/nonnegative: {e}; soc: {t, z...}; rsoc: {u, v, z...}; exponential: {u, y}
        std::string label;
    };

    struct VariableBlock
    {
        std::string name;
        int offset = 0;
        int size = 0;
        VariableRole role = VariableRole::auxiliary;
    };

    class ConicProgram
    {
    public:
        // Returns the index of the first scalar of the block.
        int add_variable(const std::string &name, int size = 1, VariableRole role = VariableRole::auxiliary);

        // Maximizes the expression.
        void set_objective(LinExpr objective);

        void add_equality(LinExpr e, std::string label = "");
        void add_nonnegative(LinExpr e, std::string label = "");
        void add_soc(LinExpr t, std::vector<LinExpr> z, std::string label = "");
        void add_rsoc(LinExpr u, LinExpr v, std::vector<LinExpr> z, std::string label = "");
        void add_exponential(LinExpr u, LinExpr y, std::string label = "");

        int num_variables() const { return num_vars_; }
        const std::vector<VariableBlock> &blocks() const { return blocks_; }
        const std::vector<Constraint> &constraints() const { return constraints_; }
        const LinExpr &objective() const { return objective_; }
        const VariableBlock &block(const std::string &name) const; // throws std::out_of_range

        std::string dump() const; // One constraint per line

    private:
        void check(const LinExpr &e) const;
        void push(ConeType type, std::vector<LinExpr> rows, std::string label);

        int num_vars_ = 0;
        std::vector<VariableBlock> blocks_;
        std::vector<Constraint> constraints_;
        LinExpr objective_;
    };

    // Total real scalar count, complex entries counted as 2.
    int variable_count(const ConicProgram &prog);

    // Model variables only, complex entries counted once.
    int model_variable_count(const ConicProgram &prog);

    enum class SolveStatus
    {
        optimal,
        infeasible,
        unbounded,
        max_iter
    };

    std::string to_string(SolveStatus s);

    struct ConicSolution
    {
        SolveStatus status = SolveStatus::max_iter;
        Eigen::VectorXd x;
        double objective = 0.0;
        double primal_residual = 0.0; // Max equality violation
        double min_slack = 0.0;       // Smallest cone slack at x (nonnegative means feasible)
        double gap = 0.0;             // Duality gap bound of the barrier path
        int newton_steps = 0;
    };

    struct SolverOptions
    {
        double barrier_growth = 16.0;
        int max_newton_steps = 4000;
        bool verbose = false; // Newton trace on stderr
    };

    ConicSolution solve(const ConicProgram &prog, double tol = 1e-9, const SolverOptions &opt = {});

} // namespace noum

#endif
