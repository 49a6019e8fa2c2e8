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

#ifndef NOUM_SCENARIOS_HPP
#define NOUM_SCENARIOS_HPP

#include "noum/model.hpp"

#include <cstdint>
#include <initializer_list>
#include <random>
#include <string>
#include <vector>

namespace noum
{
    // Reproducible generator. A stream is selected by a list of tags fed, together with the seed, through
    // std::seed_seq into std::mt19937_64; both are fully specified by the standard. Gaussian draws use
    // Box-Muller on 53-bit uniforms, so no implementation-defined distribution is involved.
    //
    // Substream tags used by the toolkit:
    //   random_channels  {1, user}            one stream per user, Nt draws in antenna order
    //   csit_samples     {2, sample, user}    one stream per (sample, user)
    //   schedule_users   {3}                  shuffle of the candidate pool
    //   derive_seed      caller tags          e.g. {realization} in the experiment harness
    class Rng
    {
    public:
        Rng(std::uint64_t seed, std::initializer_list<std::uint64_t> tags);
        Rng(std::uint64_t seed, const std::vector<std::uint64_t> &tags);

        double uniform();                 // [0, 1)
        cplx complex_normal(double variance); // CN(0, variance)
        int below(int n);                 // Uniform integer in [0, n)

    private:
        std::mt19937_64 eng_;
    };

    std::uint64_t derive_seed(std::uint64_t seed, const std::vector<std::uint64_t> &tags);

    enum class ScenarioKind
    {
        specific_two_user,
        specific_three_user,
        random_gaussian
    };

    std::string to_string(ScenarioKind k);
    ScenarioKind parse_scenario_kind(const std::string &name);

    struct CsitSpec
    {
        bool perfect = true;
        double tau = 0.6;              // Error covariance scale_k * Pt^-tau
        int samples = 100;             // M
        std::vector<double> scale;     // Per user; empty means 1.0
    };

    struct ScenarioSpec
    {
        ScenarioKind kind = ScenarioKind::specific_two_user;
        double gamma = 1.0;  // Strength of user 2 (gamma_1 for three users)
        double gamma2 = 0.3; // Strength of user 3
        double theta = 0.0;  // Radians (theta_1 for three users)
        double theta2 = 0.0; // Radians; 0 means 2 * theta
        std::vector<double> variances; // random_gaussian: per-user entry variance
        int num_tx_antennas = 4;
        int num_users = 2;
        std::uint64_t seed = 0;
        CsitSpec csit;

        void validate() const; // throws std::invalid_argument
        std::string canonical() const; // Stable text form, hashed into result rows
    };

    // Specific realizations; h_k is the column whose conjugate transpose is the listed row vector.
    ChannelSet specific_channels(const ScenarioSpec &spec);

    // i.i.d. CN(0, variance_k) entries, seeded.
    ChannelSet random_channels(const ScenarioSpec &spec);

    // Estimate plus M seeded error draws with covariance scale_k * Pt^-tau (tau = +inf gives zero error).
    ChannelSet csit_samples(const CMat &estimate, double tau, double power_budget, const std::vector<double> &scale,
                            int num_samples, std::uint64_t seed);

    enum class ScheduleMethod
    {
        correlation,
        best_strength,
        none
    };

    std::string to_string(ScheduleMethod m);
    ScheduleMethod parse_schedule_method(const std::string &name);

    // Pool columns are candidate channels. Returns selected candidate indices in selection order.
    std::vector<int> schedule_users(const CMat &pool, int num_select, ScheduleMethod method, std::uint64_t seed);

    // All set partitions of {0..K-1}, restricted-growth order.
    std::vector<std::vector<std::vector<int>>> set_partitions(int num_users);

    // Enumerated strategy configurations (K <= 4). SC_SIC_PER_GROUP uses fixed_partition when given.
    std::vector<StrategyConfig> enumerate_orders(StrategyKind kind, int num_users,
                                                 const std::vector<std::vector<int>> *fixed_partition = nullptr);

    // MRT private precoders and dominant-singular-vector shared precoders with the documented power split.
    PrecoderSet default_precoders(const StrategyConfig &strategy, const StreamLayout &layout, const CMat &H,
                                  const SystemConfig &sys);

    // Plain-text matrix format: header lines "K <n>", "Nt <n>", "seed <n>", then one line per user with
    // Nt "re,im" entries.
    std::string channel_to_text(const CMat &H, std::uint64_t seed);
    CMat channel_from_text(const std::string &text, std::uint64_t *seed = nullptr);

} // namespace noum

#endif
