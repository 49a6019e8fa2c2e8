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

#ifndef NOUM_PRECODER_VARS_HPP
#define NOUM_PRECODER_VARS_HPP

#include "noum/conic.hpp"
#include "noum/model.hpp"

#include <utility>
#include <vector>

namespace noum::detail
{
    // Interleaved (re, im) precoder block of a conic program, stream-major.
    struct PrecoderVars
    {
        int offset = 0;
        int nt = 0;

        int re(int s, int n) const { return offset + 2 * (s * nt + n); }
        int im(int s, int n) const { return re(s, n) + 1; }

        // Re and Im of f^H p_s.
        std::pair<LinExpr, LinExpr> inner(const CVec &f, int s) const
        {
            LinExpr r, i;
            for (int n = 0; n < nt; ++n)
            {
                const double fr = f(n).real(), fi = f(n).imag();
                if (fr != 0)
                {
                    r.add(re(s, n), fr);
                    i.add(im(s, n), fr);
                }
                if (fi != 0)
                {
                    r.add(im(s, n), fi);
                    i.add(re(s, n), -fi);
                }
            }
            return {r, i};
        }

        // Every real scalar of the block.
        std::vector<LinExpr> all(int num_streams) const
        {
            std::vector<LinExpr> z;
            for (int s = 0; s < num_streams; ++s)
                for (int n = 0; n < nt; ++n)
                {
                    z.push_back(LinExpr::var(re(s, n)));
                    z.push_back(LinExpr::var(im(s, n)));
                }
            return z;
        }

        PrecoderSet extract(const Eigen::VectorXd &x, int num_streams) const
        {
            PrecoderSet P = PrecoderSet::zeros(nt, num_streams);
            for (int s = 0; s < num_streams; ++s)
                for (int n = 0; n < nt; ++n)
                    P.columns(n, s) = cplx(x(re(s, n)), x(im(s, n)));
            return P;
        }
    };

    // Optimal or interior iterate at the iteration cap.
    inline bool usable(const ConicSolution &sol)
    {
        if (sol.status == SolveStatus::optimal)
            return true;
        return sol.status == SolveStatus::max_iter && sol.min_slack >= 0 && sol.primal_residual <= 1e-8;
    }
} // namespace noum::detail

#endif
