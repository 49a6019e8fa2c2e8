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

#include "noum/conic.hpp"

#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

using namespace noum;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::WithinAbs;

TEST_CASE("linear bound", "[conic]")
{
    ConicProgram p;
    const int t = p.add_variable("t");
    p.set_objective(LinExpr::var(t));
    p.add_nonnegative(LinExpr(3.0) - LinExpr::var(t));
    ConicSolution s = solve(p, 1e-10);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE_THAT(s.objective, WithinAbs(3.0, 1e-8));
}

TEST_CASE("second-order cone geometry", "[conic]")
{
    ConicProgram p;
    const int x = p.add_variable("x");
    p.set_objective(LinExpr::var(x));
    p.add_soc(LinExpr(2.0), {LinExpr::var(x), LinExpr(1.0)});
    ConicSolution s = solve(p, 1e-10);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE_THAT(s.x(x), WithinAbs(std::sqrt(3.0), 1e-7));
}

TEST_CASE("exponential cone lowering of a power of two", "[conic]")
{
    ConicProgram p;
    const int th = p.add_variable("theta");
    const int a = p.add_variable("alpha");
    p.set_objective(-1.0 * LinExpr::var(th));
    p.add_equality(LinExpr::var(a) - LinExpr(2.0));
    p.add_exponential(LinExpr::var(a, std::log(2.0)), LinExpr::var(th));
    ConicSolution s = solve(p, 1e-10);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE_THAT(s.x(th), WithinAbs(4.0, 1e-7));
}

TEST_CASE("largest exponent under an exponential budget", "[conic]")
{
    ConicProgram p;
    const int a = p.add_variable("alpha");
    p.set_objective(LinExpr::var(a));
    p.add_exponential(LinExpr::var(a, std::log(2.0)), LinExpr(5.0));
    ConicSolution s = solve(p, 1e-10);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE_THAT(s.x(a), WithinAbs(std::log2(5.0), 1e-7));
}

TEST_CASE("rotated cone", "[conic]")
{
    ConicProgram p;
    const int x = p.add_variable("x");
    p.set_objective(LinExpr::var(x));
    p.add_rsoc(LinExpr(2.0), LinExpr(3.0), {LinExpr::var(x)});
    ConicSolution s = solve(p, 1e-10);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE_THAT(s.x(x), WithinAbs(std::sqrt(6.0), 1e-7));
}

TEST_CASE("linear objective over a ball", "[conic]")
{
    std::mt19937_64 eng(4);
    std::normal_distribution<double> nd;
    for (int trial = 0; trial < 5; ++trial)
    {
        const int n = 3 + trial;
        ConicProgram p;
        const int x = p.add_variable("x", n);
        std::vector<double> c(n);
        LinExpr obj;
        std::vector<LinExpr> z;
        double norm = 0;
        for (int i = 0; i < n; ++i)
        {
            c[i] = nd(eng);
            norm += c[i] * c[i];
            obj.add(x + i, c[i]);
            z.push_back(LinExpr::var(x + i));
        }
        p.set_objective(obj);
        p.add_soc(LinExpr(1.5), z);
        ConicSolution s = solve(p, 1e-10);
        REQUIRE(s.status == SolveStatus::optimal);
        REQUIRE_THAT(s.objective, WithinAbs(1.5 * std::sqrt(norm), 1e-7));
    }
}

TEST_CASE("mixed cones with an active linear side constraint", "[conic]")
{
    // max x + y s.t. ||(x, y)|| <= 2, y <= 0.5: optimum at y = 0.5, x = sqrt(3.75).
    ConicProgram p;
    const int x = p.add_variable("x");
    const int y = p.add_variable("y");
    p.set_objective(LinExpr::var(x) + LinExpr::var(y));
    p.add_soc(LinExpr(2.0), {LinExpr::var(x), LinExpr::var(y)});
    p.add_nonnegative(LinExpr(0.5) - LinExpr::var(y));
    ConicSolution s = solve(p, 1e-10);
    REQUIRE(s.status == SolveStatus::optimal);
    REQUIRE_THAT(s.x(x), WithinAbs(std::sqrt(3.75), 1e-6));
    REQUIRE_THAT(s.x(y), WithinAbs(0.5, 1e-6));
}

TEST_CASE("infeasible and unbounded programs are reported", "[conic]")
{
    {
        ConicProgram p;
        const int x = p.add_variable("x");
        p.set_objective(LinExpr::var(x));
        p.add_nonnegative(LinExpr::var(x) - LinExpr(3.0));
        p.add_nonnegative(LinExpr(2.0) - LinExpr::var(x));
        REQUIRE(solve(p, 1e-10).status == SolveStatus::infeasible);
    }
    {
        ConicProgram p;
        const int x = p.add_variable("x");
        p.set_objective(LinExpr::var(x));
        p.add_soc(LinExpr(1.0), {LinExpr::var(x), LinExpr(2.0)});
        REQUIRE(solve(p, 1e-10).status == SolveStatus::infeasible);
    }
    {
        ConicProgram p;
        const int x = p.add_variable("x");
        p.set_objective(LinExpr::var(x));
        p.add_nonnegative(LinExpr::var(x) - LinExpr(3.0));
        REQUIRE(solve(p, 1e-10).status == SolveStatus::unbounded);
    }
}

TEST_CASE("malformed programs fail at construction", "[conic]")
{
    ConicProgram p;
    p.add_variable("x");
    REQUIRE_THROWS_AS(p.add_nonnegative(LinExpr::var(3)), std::invalid_argument);
    REQUIRE_THROWS_AS(p.add_variable("x"), std::invalid_argument);
    REQUIRE_THROWS_AS(p.add_variable("z", 3, VariableRole::model_complex), std::invalid_argument);
    REQUIRE_THROWS_AS(p.add_nonnegative(LinExpr(std::nan(""))), std::invalid_argument);
    REQUIRE_THROWS_AS(p.block("missing"), std::out_of_range);
    REQUIRE_THROWS_AS(solve(p, 0.0), std::invalid_argument);
}

TEST_CASE("variable counts by role", "[conic][count]")
{
    ConicProgram p;
    p.add_variable("P", 8, VariableRole::model_complex);
    p.add_variable("c", 3, VariableRole::model_real);
    p.add_variable("aux", 5);
    REQUIRE(variable_count(p) == 16);
    REQUIRE(model_variable_count(p) == 7);
}

TEST_CASE("dump writes one line per constraint", "[conic]")
{
    ConicProgram p;
    const int x = p.add_variable("x");
    p.add_nonnegative(LinExpr::var(x), "lower");
    p.add_soc(LinExpr(1.0), {LinExpr::var(x)}, "ball");
    p.add_equality(LinExpr::var(x) - LinExpr(0.5), "pin");
    const std::string d = p.dump();
    REQUIRE_THAT(d, ContainsSubstring("lower"));
    REQUIRE_THAT(d, ContainsSubstring("ball"));
    REQUIRE_THAT(d, ContainsSubstring("pin"));
}

TEST_CASE("repeat solves agree and objective scaling scales the optimum", "[conic][property]")
{
    auto build = [](double scale)
    {
        ConicProgram p;
        const int x = p.add_variable("x", 3);
        p.set_objective(scale * (LinExpr::var(x) + LinExpr::var(x + 1, 2.0) - LinExpr::var(x + 2, 0.5)));
        p.add_soc(LinExpr(3.0), {LinExpr::var(x), LinExpr::var(x + 1), LinExpr::var(x + 2)});
        p.add_nonnegative(LinExpr(1.0) - LinExpr::var(x + 1));
        p.add_exponential(LinExpr::var(x), LinExpr(4.0));
        return p;
    };
    const double tol = 1e-9;
    ConicSolution a = solve(build(1.0), tol), b = solve(build(1.0), tol), c = solve(build(7.5), tol);
    REQUIRE(a.status == SolveStatus::optimal);
    REQUIRE(c.status == SolveStatus::optimal);
    REQUIRE_THAT(a.objective, WithinAbs(b.objective, 10 * tol));
    REQUIRE_THAT(c.objective, WithinAbs(7.5 * a.objective, 1e-6));
    for (int i = 0; i < 3; ++i)
        REQUIRE_THAT(c.x(i), WithinAbs(a.x(i), 1e-5));
}
