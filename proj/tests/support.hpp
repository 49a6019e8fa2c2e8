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

#ifndef NOUM_TESTS_SUPPORT_HPP
#define NOUM_TESTS_SUPPORT_HPP

#include "noum/model.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <vector>

namespace noum::test
{
    inline int stream_index(const StreamLayout &layout, const std::string &name)
    {
        for (int s = 0; s < layout.num_streams(); ++s)
            if (layout.streams[s].name() == name)
                return s;
        throw std::out_of_range("no stream " + name);
    }

    inline std::vector<std::string> chain_names(const StreamLayout &layout, int user)
    {
        std::vector<std::string> out;
        for (int s : layout.chains[user])
            out.push_back(layout.streams[s].name());
        return out;
    }

    inline SystemConfig system(int K, int Nt, double Pt)
    {
        SystemConfig sys;
        sys.num_users = K;
        sys.num_tx_antennas = Nt;
        sys.power_budget = Pt;
        return sys;
    }

    inline double min_increment(const std::vector<double> &trace)
    {
        double m = 0.0;
        for (std::size_t i = 1; i < trace.size(); ++i)
            m = std::min(m, trace[i] - trace[i - 1]);
        return m;
    }
} // namespace noum::test

#endif
