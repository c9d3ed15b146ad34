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

#include "nfris/channel.hpp"
#include "nfris/random.hpp"

#include <doctest.h>

#include <sstream>

using namespace nfris;

namespace
{

Path los(double amplitude) { return {PathKind::LOS, std::nullopt, amplitude, {1.0, 0.0}}; }

Path nlos(const Position &s, double amplitude, cplx fading = {1.0, 0.0}) { return {PathKind::NLOS, s, amplitude, fading}; }

bool close(cplx a, cplx b, double tol = 1e-12) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

/// Random link with a LOS path and `n` NLOS paths of random amplitude and fading.
LinkPaths random_link(Rng &rng, int n)
{
    std::uniform_real_distribution<double> u(0.1, 2.0);
    LinkPaths l{LinkKind::BsRis, {los(u(rng))}};
    for (int i = 0; i < n; ++i)
        l.paths.push_back(nlos({u(rng), u(rng), u(rng)}, u(rng), draw_cn01(rng)));
    return l;
}

} // namespace

TEST_CASE("free-space amplitude")
{
    const double lambda = 0.010707;
    CHECK(free_space_amplitude(lambda / (4 * pi), lambda) == doctest::Approx(1.0));
    CHECK(free_space_amplitude(20.0, lambda) == doctest::Approx(free_space_amplitude(10.0, lambda) / 2));
    CHECK(free_space_amplitude(40.0, lambda) == doctest::Approx(2.130e-5).epsilon(1e-3));
    CHECK_THROWS_AS(free_space_amplitude(0.0, lambda), std::invalid_argument);
}

TEST_CASE("scatterer generation")
{
    const Box box{{0, 0, 0}, {60, 60, 10}};
    Rng rng(3);
    CHECK(generate_scatterers(box, 0, rng).empty());

    Rng a(11), b(11);
    const auto pa = generate_scatterers(box, 20, a);
    const auto pb = generate_scatterers(box, 20, b);
    REQUIRE(pa.size() == 20);
    CHECK(pa == pb);
    for (const auto &p : pa)
    {
        CHECK(p.x >= 0.0);
        CHECK(p.x <= 60.0);
        CHECK(p.y >= 0.0);
        CHECK(p.y <= 60.0);
        CHECK(p.z >= 0.0);
        CHECK(p.z <= 10.0);
    }
    CHECK_THROWS_AS(generate_scatterers(box, -1, rng), std::invalid_argument);
}

TEST_CASE("path length")
{
    CHECK(path_length({0, 0, 0}, los(1), {3, 4, 0}) == doctest::Approx(5.0));
    CHECK(path_length({0, 0, 0}, nlos({0, 4, 0}, 1), {0, 8, 0}) == doctest::Approx(8.0));
    CHECK(path_length({0, 0, 0}, nlos({3, 0, 0}, 1), {3, 4, 0}) == doctest::Approx(7.0));
}

TEST_CASE("assemble_channel: single LOS path")
{
    const double lambda = 0.01;
    const std::vector<Position> tx{{0, 0, 0}};
    {
        const std::vector<Position> rx{{lambda, 0, 0}};
        const LinkPaths l{LinkKind::BsMu, {los(1.0)}};
        const auto H = assemble_channel(l, tx, rx, lambda, PhaseSign::Negative);
        CHECK(close(H(0, 0), {1.0, 0.0}));
    }
    {
        const std::vector<Position> rx{{lambda / 2, 0, 0}};
        const LinkPaths l{LinkKind::BsMu, {los(0.5)}};
        const auto H = assemble_channel(l, tx, rx, lambda, PhaseSign::Positive);
        CHECK(close(H(0, 0), {-0.5, 0.0}));
    }
}

TEST_CASE("assemble_channel: LOS and NLOS half a wavelength apart cancel")
{
    const double lambda = 0.01;
    const std::vector<Position> tx{{0, 0, 0}};
    const std::vector<Position> rx{{lambda, 0, 0}};
    // Scatterer above the midpoint so that the bounce is 1.5 lambda long.
    const double h = lambda * std::sqrt(0.75 * 0.75 - 0.25);
    const LinkPaths l{LinkKind::BsMu, {los(1.0), nlos({lambda / 2, h, 0}, 1.0)}};
    CHECK(path_length(tx[0], l.paths[1], rx[0]) == doctest::Approx(1.5 * lambda));
    const auto H = assemble_channel(l, tx, rx, lambda, PhaseSign::Negative);
    CHECK(std::abs(H(0, 0)) < 1e-12);
}

TEST_CASE("assemble_channel is linear in the paths")
{
    Rng rng(5);
    const double lambda = 0.0107;
    std::vector<Position> tx, rx;
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 3; ++i)
        tx.push_back({u(rng), u(rng), u(rng)});
    for (int i = 0; i < 4; ++i)
        rx.push_back({10 + u(rng), u(rng), u(rng)});
    const auto both = random_link(rng, 1);
    LinkPaths first{both.link, {both.paths[0]}};
    LinkPaths second = first;
    second.paths[0].amplitude = 0.0;
    second.paths.push_back(both.paths[1]);
    for (auto sign : {PhaseSign::Positive, PhaseSign::Negative})
    {
        const CMatrix sum = assemble_channel(first, tx, rx, lambda, sign) + assemble_channel(second, tx, rx, lambda, sign);
        CHECK((assemble_channel(both, tx, rx, lambda, sign) - sum).norm() < 1e-12 * sum.norm());
    }
}

TEST_CASE("single LOS entry magnitude decays as 1/d")
{
    const double lambda = 0.0107;
    const std::vector<Position> tx{{0, 0, 0}};
    for (double d : {1.0, 2.0, 5.0, 40.0})
    {
        const std::vector<Position> rx{{0, d, 0}};
        const LinkPaths l{LinkKind::RisMu, {los(free_space_amplitude(d, lambda))}};
        const auto H = assemble_channel(l, tx, rx, lambda, PhaseSign::Positive);
        CHECK(std::abs(H(0, 0)) == doctest::Approx(lambda / (4 * pi * d)));
    }
}

TEST_CASE("projected forms agree with the full matrix")
{
    Rng rng(9);
    const double lambda = 0.0107;
    std::uniform_real_distribution<double> u(-0.2, 0.2);
    std::vector<Position> tx, rx;
    for (int i = 0; i < 5; ++i)
        tx.push_back({40 + u(rng), 0, 10 + u(rng)});
    for (int i = 0; i < 7; ++i)
        rx.push_back({0, 40 + u(rng), 5 + u(rng)});
    const auto link = random_link(rng, 4);
    CVector w(5);
    for (int i = 0; i < 5; ++i)
        w(i) = draw_cn01(rng);
    for (auto sign : {PhaseSign::Positive, PhaseSign::Negative})
    {
        const CVector ref = assemble_channel(link, tx, rx, lambda, sign) * w;
        // NLOS phases are split into two legs, so rounding of ~4000 rad phases shows up near 1e-12.
        CHECK((assemble_projected(link, tx, rx, lambda, sign, w) - ref).norm() < 1e-10 * ref.norm());
        const auto responses = projected_path_responses(link, tx, rx, lambda, sign, w);
        CHECK((combine_paths(link, responses) - ref).norm() < 1e-10 * ref.norm());
    }
}

TEST_CASE("apply_beta examples")
{
    SUBCASE("0 dB equalizes LOS and NLOS power")
    {
        const LinkPaths l{LinkKind::BsRis, {los(1.0), nlos({1, 1, 1}, 0.37)}};
        const auto s = apply_beta(l, 0.0);
        CHECK(s.paths[1].amplitude == doctest::Approx(1.0));
        CHECK(s.paths[0].amplitude == 1.0);
    }
    SUBCASE("10 dB leaves a tenth of the LOS power in NLOS")
    {
        LinkPaths l{LinkKind::BsRis, {los(1.0)}};
        for (int i = 0; i < 4; ++i)
            l.paths.push_back(nlos({1, 2, 3}, 0.1 * (i + 1)));
        const auto s = apply_beta(l, 10.0);
        CHECK(s.nlos_power() == doctest::Approx(0.1));
        // Relative NLOS powers are preserved.
        CHECK(s.paths[2].amplitude / s.paths[1].amplitude == doctest::Approx(2.0));
    }
    SUBCASE("idempotent")
    {
        Rng rng(1);
        const auto l = random_link(rng, 6);
        const auto once = apply_beta(l, 7.0);
        const auto twice = apply_beta(once, 7.0);
        for (std::size_t i = 0; i < l.paths.size(); ++i)
            CHECK(twice.paths[i].amplitude == doctest::Approx(once.paths[i].amplitude).epsilon(1e-14));
    }
    SUBCASE("+inf removes NLOS paths")
    {
        Rng rng(2);
        const auto s = apply_beta(random_link(rng, 3), INFINITY);
        CHECK(s.nlos_power() == 0.0);
        CHECK(s.los_power() > 0.0);
    }
    SUBCASE("errors")
    {
        const LinkPaths only_los{LinkKind::BsRis, {los(1.0)}};
        CHECK_THROWS_AS(apply_beta(only_los, 10.0), std::invalid_argument);
        const LinkPaths l{LinkKind::BsRis, {los(1.0), nlos({1, 1, 1}, 0.5)}};
        CHECK_THROWS_AS(apply_beta(l, std::nan("")), std::invalid_argument);
        CHECK_THROWS_AS(apply_beta(l, -INFINITY), std::invalid_argument);
        const LinkPaths no_los{LinkKind::BsRis, {nlos({1, 1, 1}, 0.5)}};
        CHECK_THROWS_AS(apply_beta(no_los, 0.0), std::invalid_argument);
    }
}

TEST_CASE("beta fidelity over random links and targets")
{
    Rng rng(42);
    std::uniform_real_distribution<double> beta(-30.0, 40.0);
    std::uniform_int_distribution<int> count(1, 25);
    for (int trial = 0; trial < 500; ++trial)
    {
        const double b = beta(rng);
        const auto s = apply_beta(random_link(rng, count(rng)), b);
        const double ratio = s.los_power() / s.nlos_power();
        CHECK(std::abs(ratio / db_to_linear(b) - 1.0) < 1e-9);
    }
}

TEST_CASE("blockage attenuation applies to amplitudes")
{
    const LinkPaths l{LinkKind::BsMu, {los(2.0), nlos({0, 0, 1}, 0.4)}};
    const auto b = blockage_attenuation(l, 20.0);
    CHECK(b.paths[0].amplitude == doctest::Approx(0.2));
    CHECK(b.paths[1].amplitude == doctest::Approx(0.04));
    CHECK(b.los_power() / l.los_power() == doctest::Approx(0.01));
    CHECK(blockage_attenuation(l, 0.0).paths[0].amplitude == 2.0);
    CHECK_THROWS_AS(blockage_attenuation(l, -1.0), std::invalid_argument);
}

TEST_CASE("noise power")
{
    CHECK(noise_power({-176.0, 1e8, 6.0}) == doctest::Approx(1e-12));
    CHECK(noise_power({-176.0, 1.0, 0.0}) == doctest::Approx(std::pow(10.0, -20.6)));
    CHECK(linear_to_db(noise_power({-176.0, 2e8, 6.0}) / noise_power({-176.0, 1e8, 6.0})) ==
          doctest::Approx(3.0103).epsilon(1e-5));
    CHECK_THROWS_AS(noise_power({-176.0, -1.0, 6.0}), std::invalid_argument);
}

TEST_CASE("link construction from scatterers")
{
    const double lambda = 0.0107;
    const Position tx{40, 0, 10}, rx{0, 40, 5};
    Rng scat(1), fade_a(2), fade_b(2);
    const auto scatterers = generate_scatterers({{0, 0, 0}, {60, 60, 10}}, 20, scat);
    const auto a = make_link_paths(LinkKind::BsRis, tx, rx, scatterers, fade_a, lambda);
    const auto b = make_link_paths(LinkKind::BsRis, tx, rx, scatterers, fade_b, lambda);
    REQUIRE(a.paths.size() == 21);
    CHECK_NOTHROW(a.validate());
    CHECK(a.paths[0].amplitude == doctest::Approx(free_space_amplitude(distance(tx, rx), lambda)));
    CHECK(a.paths[0].fading == cplx(1.0, 0.0));
    for (std::size_t i = 1; i < a.paths.size(); ++i)
    {
        CHECK(a.paths[i].amplitude == doctest::Approx(free_space_amplitude(path_length(tx, a.paths[i], rx), lambda)));
        CHECK(a.paths[i].fading == b.paths[i].fading);
    }
}

TEST_CASE("CN(0,1) draws have unit variance and zero mean")
{
    Rng rng(123);
    cplx mean{0, 0};
    double power = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i)
    {
        const cplx z = draw_cn01(rng);
        mean += z;
        power += std::norm(z);
    }
    CHECK(std::abs(mean / double(n)) < 0.01);
    CHECK(power / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("labeled streams are independent and reproducible")
{
    Rng a = make_stream(99, Stream::FadingBsRis);
    Rng b = make_stream(99, Stream::FadingBsRis);
    Rng c = make_stream(99, Stream::FadingRisMu);
    const auto x = a(), y = b(), z = c();
    CHECK(x == y);
    CHECK(x != z);
    CHECK(trial_seed(1, 0) != trial_seed(1, 1));
    CHECK(trial_seed(1, 0) != trial_seed(2, 0));
}

TEST_CASE("channel JSON round trip")
{
    Rng rng(4);
    ChannelSet cs{CMatrix::Random(1, 3), CMatrix::Random(5, 3), CMatrix::Random(1, 5)};
    std::stringstream buf;
    write_channel_json(cs, buf);
    const auto back = read_channel_json(buf);
    CHECK(back.H == cs.H);
    CHECK(back.H1 == cs.H1);
    CHECK(back.H2 == cs.H2);
}
