// SPDX-License-Identifier: Apache-2.0
//
// nfris: near-field RIS link-level simulator
// Copyright (C) 2026 The nfris authors
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

#include "nfris/harness.hpp"

#include <doctest.h>

#include <algorithm>

using namespace nfris;

namespace
{

const Simulator &reference()
{
    static const Simulator sim{Scenario{}};
    return sim;
}

bool same(const TrialResult &a, const TrialResult &b)
{
    if (a.seed != b.seed || !(a.mu == b.mu) || a.beta_db != b.beta_db || a.trace.pilots != b.trace.pilots)
        return false;
    for (std::size_t i = 0; i < a.schemes.size(); ++i)
        if (a.schemes[i].snr_linear != b.schemes[i].snr_linear || a.schemes[i].scheme != b.schemes[i].scheme)
            return false;
    return true;
}

double mean_db(const std::vector<TrialResult> &trials, Scheme s)
{
    double sum = 0;
    for (const auto &t : trials)
        sum += t.at(s).snr_db;
    return sum / static_cast<double>(trials.size());
}

} // namespace

TEST_CASE("realizations stay inside the blockage area and carry the configured path counts")
{
    const auto &sim = reference();
    for (std::uint64_t seed : {1ULL, 2ULL, 99ULL})
    {
        const auto r = sim.draw(seed);
        CHECK(sim.scenario().area.contains(r.mu));
        CHECK(r.mu.z == sim.scenario().area.center.z);
        CHECK(r.bs_ris.paths.size() == 21);
        CHECK(r.ris_mu.paths.size() == 21);
        CHECK(r.bs_mu.paths.size() == 21);
        CHECK(r.mu_antennas.size() == 1);
    }
}

TEST_CASE("same seed, same trial")
{
    const auto &sim = reference();
    CHECK(same(sim.run_trial(10.0, 5), sim.run_trial(10.0, 5)));
    CHECK(same(run_trial(Scenario{}, 10.0, 5), sim.run_trial(10.0, 5)));
    CHECK_FALSE(same(sim.run_trial(10.0, 5), sim.run_trial(10.0, 6)));
}

TEST_CASE("projected channels agree with the full matrices")
{
    Scenario s;
    s.ris_size_y = s.ris_size_z = 0.1; // keeps H1 small
    const Simulator sim(s);
    const auto r = sim.draw(3);
    const auto ch = sim.channels(r, 5.0);
    const auto cs = sim.channel_set(r, 5.0);
    const auto proj = project(cs, sim.precoder());
    CHECK((proj.h1 - ch.h1).norm() <= 1e-9 * ch.h1.norm());
    CHECK((proj.H2 - ch.H2).norm() <= 1e-9 * ch.H2.norm());
    CHECK((proj.h_direct - ch.h_direct).norm() <= 1e-9 * ch.h_direct.norm());
}

TEST_CASE("beta scaling and blockage reach the scaled links")
{
    const auto &sim = reference();
    const auto r = sim.draw(11);
    const auto links = sim.scaled_links(r, 10.0);
    for (const auto &l : links)
        CHECK(l.los_power() / l.nlos_power() == doctest::Approx(10.0).epsilon(1e-9));
    CHECK(links[2].paths[0].amplitude == doctest::Approx(r.bs_mu.paths[0].amplitude * 0.1));
}

TEST_CASE("with NLOS removed, full focusing matches the LOS pathloss prediction")
{
    const auto &sim = reference();
    const Scenario &s = sim.scenario();
    const double n_bs = s.bs_elements_x * s.bs_elements_z;
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL, 4ULL})
    {
        const auto t = sim.run_trial(INFINITY, seed);
        const double pl1 = free_space_amplitude(distance(s.bs_center, s.ris_center), sim.lambda());
        const double pl2 = free_space_amplitude(distance(s.ris_center, t.mu), sim.lambda());
        const double gq = sim.unit_gain() * sim.ris().size();
        const double predicted = 10 * std::log10(s.p_bs_watts() * n_bs * std::pow(pl1 * pl2 * gq, 2) / sim.sigma2());
        // The blocked direct path adds with an unknown phase: bound the deviation by its relative amplitude.
        const double direct = 0.1 * free_space_amplitude(distance(s.bs_center, t.mu), sim.lambda());
        const double bound = 20 * std::log10(1 + direct / (pl1 * pl2 * gq)) + 0.01;
        CHECK(std::abs(t.at(Scheme::FullFocusing).snr_db - predicted) < bound);
    }
}

TEST_CASE("the search never beats full search, trial by trial")
{
    const auto &sim = reference();
    const auto res = sim.sweep({0.0, 10.0}, 10, 1);
    for (const auto &per_beta : res)
        for (const auto &t : per_beta)
        {
            CHECK(t.at(Scheme::Hierarchical).snr_linear <= t.at(Scheme::FullCodebook).snr_linear);
            CHECK(t.at(Scheme::Hierarchical).cost.pilots == 24);
            CHECK(t.at(Scheme::FullCodebook).cost.pilots == 256);
        }
}

TEST_CASE("sweep output does not depend on the worker count")
{
    const auto &sim = reference();
    const auto a = sim.sweep({-5.0, 10.0}, 6, 1);
    const auto b = sim.sweep({-5.0, 10.0}, 6, 3);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
    {
        REQUIRE(a[i].size() == b[i].size());
        for (std::size_t k = 0; k < a[i].size(); ++k)
        {
            CHECK(a[i][k].trial == static_cast<int>(k));
            CHECK(same(a[i][k], b[i][k]));
        }
    }
}

TEST_CASE("mean ordering B3 >= B2 >= B1 >= proposed at non-negative beta")
{
    const auto &sim = reference();
    const auto res = sim.sweep({0.0, 10.0, 20.0}, 20, 1);
    for (const auto &per_beta : res)
    {
        const double b3 = mean_db(per_beta, Scheme::FullCsi), b2 = mean_db(per_beta, Scheme::FullFocusing);
        const double b1 = mean_db(per_beta, Scheme::FullCodebook), pr = mean_db(per_beta, Scheme::Hierarchical);
        MESSAGE("beta " << per_beta.front().beta_db << ": " << b3 << " " << b2 << " " << b1 << " " << pr);
        CHECK(b3 >= b2);
        CHECK(b2 >= b1);
        CHECK(b1 >= pr);
    }
}

TEST_CASE("aggregation")
{
    const auto &sim = reference();
    const auto one = sim.sweep({10.0}, 1, 1);
    const auto rows = aggregate(one, false);
    REQUIRE(rows.size() == 4);
    for (std::size_t i = 0; i < 4; ++i)
    {
        CHECK(rows[i].scheme == all_schemes[i]);
        CHECK(rows[i].mean_snr_db == one[0][0].schemes[i].snr_db);
        CHECK(rows[i].std_snr_db == 0.0);
        CHECK(rows[i].trials == 1);
    }

    // Two synthetic trials: mean of dB versus dB of the linear mean.
    TrialResult a, b;
    a.beta_db = b.beta_db = 0.0;
    for (std::size_t i = 0; i < 4; ++i)
    {
        a.schemes[i] = make_result(all_schemes[i], 10.0, {});
        b.schemes[i] = make_result(all_schemes[i], 1000.0, {});
    }
    const std::vector<std::vector<TrialResult>> two{{a, b}};
    CHECK(aggregate(two, false)[0].mean_snr_db == doctest::Approx(20.0));
    CHECK(aggregate(two, true)[0].mean_snr_db == doctest::Approx(10 * std::log10(505.0)));
    CHECK(aggregate(two, false)[0].std_snr_db == doctest::Approx(std::sqrt(200.0)));
}

TEST_CASE("focusing cut: center value matches the pathloss closed form")
{
    const auto &sim = reference();
    const Scenario &s = sim.scenario();
    const auto cut = focusing_cut(sim, Axis::Y, 2.0, 5);
    REQUIRE(cut.size() == 5);
    CHECK(cut[2].displacement == 0.0);
    const double pl1 = free_space_amplitude(distance(s.bs_center, s.ris_center), sim.lambda());
    const double pl2 = free_space_amplitude(distance(s.ris_center, s.area.center), sim.lambda());
    const double gq = pi * 8649;
    const double expect = 10 * std::log10(s.p_bs_watts() * std::pow(pl1 * pl2 * gq, 2) / sim.sigma2());
    CHECK(cut[2].snr_db == doctest::Approx(expect).epsilon(1e-9));
    CHECK_THROWS_AS(focusing_cut(sim, Axis::X, 0.0, 5), std::invalid_argument);
}

TEST_CASE("focusing cut: the focal point is the peak of |g_ris|, and within 0.05 dB of the SNR peak")
{
    const auto &sim = reference();
    for (Axis axis : {Axis::X, Axis::Y})
    {
        const auto cut = focusing_cut(sim, axis, 8.0, 401);
        const auto mid = cut[200];
        CHECK(mid.displacement == doctest::Approx(0.0));
        const auto peak = *std::max_element(cut.begin(), cut.end(),
                                            [](const CutPoint &a, const CutPoint &b) { return a.snr_db < b.snr_db; });
        MESSAGE("SNR peak at " << peak.displacement << " m, " << peak.snr_db - mid.snr_db << " dB above the focus");
        CHECK(peak.snr_db - mid.snr_db < 0.05);
        // Remove the distance-dependent pathloss: the array factor itself peaks at the focus.
        const auto &s = sim.scenario();
        double best = -1e9, best_delta = 1e9;
        for (const auto &p : cut)
        {
            const Position pr = s.area.center + (axis == Axis::X ? Position{p.displacement, 0, 0} : Position{0, p.displacement, 0});
            const double pl2 = free_space_amplitude(distance(pr, s.ris_center), sim.lambda());
            const double af = p.snr_db - 20 * std::log10(pl2);
            if (af > best)
            {
                best = af;
                best_delta = p.displacement;
            }
        }
        CHECK(best_delta == doctest::Approx(0.0));
    }
}

TEST_CASE("main lobe along x is wider than along y")
{
    const auto &sim = reference();
    const double wx = main_lobe_width_3db(focusing_cut(sim, Axis::X, 8.0, 801));
    const double wy = main_lobe_width_3db(focusing_cut(sim, Axis::Y, 8.0, 801));
    MESSAGE("-3 dB widths: x " << wx << " m, y " << wy << " m");
    CHECK(wx > wy);
}

TEST_CASE("main-lobe width on a synthetic triangle")
{
    // Peak 0 dB at 0, linear slopes of 1 dB per meter: the -3 dB points are at +-3 m.
    std::vector<CutPoint> cut;
    for (int i = -10; i <= 10; ++i)
        cut.push_back({static_cast<double>(i), -std::abs(static_cast<double>(i))});
    CHECK(main_lobe_width_3db(cut) == doctest::Approx(6.0));
    // Asymmetric slopes: 0.5 dB/m on the left, 2 dB/m on the right -> 6 + 1.5.
    cut.clear();
    for (int i = -10; i <= 10; ++i)
        cut.push_back({static_cast<double>(i), i < 0 ? 0.5 * i : -2.0 * i});
    CHECK(main_lobe_width_3db(cut) == doctest::Approx(7.5));
}

TEST_CASE("raster axis samples are cell centered")
{
    const auto a = raster_axis(16.0, 4);
    CHECK(a == std::vector<double>{-6.0, -2.0, 2.0, 6.0});
}

TEST_CASE("heatmap: a codeword is stronger at its own cell center than at the area corner")
{
    const auto &sim = reference();
    const auto r = heatmap(sim, 0, {}, 16, 16, 1);
    REQUIRE(r.cells.size() == 16);
    for (std::size_t k = 0; k < r.cells.size(); ++k)
    {
        // Cell (w_x, w_y) of a 4 x 4 level centers on raster samples 4 w + {1, 2}.
        const std::size_t ix = 4 * static_cast<std::size_t>(r.cells[k].x) + 2;
        const std::size_t iy = 4 * static_cast<std::size_t>(r.cells[k].y) + 2;
        const double corner = std::min({r.value(k, 0, 0), r.value(k, 0, 15), r.value(k, 15, 0), r.value(k, 15, 15)});
        CHECK(r.value(k, ix, iy) >= corner);
    }
    for (std::size_t p = 0; p < r.composite_db.size(); ++p)
    {
        double m = -1e300;
        for (std::size_t k = 0; k < r.cells.size(); ++k)
            m = std::max(m, r.snr_db[k][p]);
        CHECK(r.composite_db[p] == m);
    }
    CHECK_THROWS_AS(heatmap(sim, 9, {}, 4, 4, 1), std::out_of_range);
}

TEST_CASE("heatmap: alpha = 0 narrows the -3 dB footprint")
{
    auto footprint = [](double alpha) {
        Scenario s;
        s.alpha = alpha;
        s.levels = {{4, 4}};
        const Simulator sim(s);
        const auto r = heatmap(sim, 0, {{1, 2}}, 48, 48, 1);
        const double peak = *std::max_element(r.snr_db[0].begin(), r.snr_db[0].end());
        return std::count_if(r.snr_db[0].begin(), r.snr_db[0].end(), [&](double v) { return v >= peak - 3.0; });
    };
    const auto narrow = footprint(0.0), wide = footprint(0.8);
    MESSAGE("-3 dB footprint samples: alpha 0 -> " << narrow << ", alpha 0.8 -> " << wide);
    CHECK(narrow < wide);
}

TEST_CASE("heatmap output does not depend on the worker count")
{
    const auto &sim = reference();
    const auto a = heatmap(sim, 1, {{2, 3}, {5, 5}}, 12, 12, 1);
    const auto b = heatmap(sim, 1, {{2, 3}, {5, 5}}, 12, 12, 3);
    CHECK(a.snr_db == b.snr_db);
    CHECK(a.composite_db == b.composite_db);
}
