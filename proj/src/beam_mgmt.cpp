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

#include "nfris/beam_mgmt.hpp"

#include <json.hpp>

#include <cmath>
#include <stdexcept>

namespace nfris
{

void CombinerCodebook::validate() const
{
    if (combiners.empty())
        throw std::invalid_argument("CombinerCodebook: empty combiner set");
    const auto n = combiners.front().size();
    for (const auto &u : combiners)
    {
        if (u.size() != n)
            throw std::invalid_argument("CombinerCodebook: combiners of different lengths");
        if (std::abs(u.norm() - 1.0) > 1e-9)
            throw std::invalid_argument("CombinerCodebook: combiners must have unit norm");
    }
}

CombinerCodebook dft_combiners(int n_mu)
{
    if (n_mu < 1)
        throw std::invalid_argument("dft_combiners: N_mu must be >= 1");
    CombinerCodebook cb;
    const double scale = 1.0 / std::sqrt(static_cast<double>(n_mu));
    for (int b = 0; b < n_mu; ++b)
    {
        CVector u(n_mu);
        for (int n = 0; n < n_mu; ++n)
        {
            const double phase = 2.0 * pi * b * n / n_mu;
            u(n) = scale * cplx{std::cos(phase), std::sin(phase)};
        }
        cb.combiners.push_back(std::move(u));
    }
    return cb;
}

Eigen::DiagonalMatrix<cplx, Eigen::Dynamic> ris_profile(const PhaseVector &omega, double g)
{
    CVector d(static_cast<Eigen::Index>(omega.size()));
    for (std::size_t q = 0; q < omega.size(); ++q)
        d(static_cast<Eigen::Index>(q)) = g * cplx{std::cos(omega.omega[q]), std::sin(omega.omega[q])};
    return Eigen::DiagonalMatrix<cplx, Eigen::Dynamic>(d);
}

Precoder bs_precoder_focus_ris(const ArrayGeometry &bs, const Position &p_ris, double lambda, double p_bs_watts,
                               PhaseSign sign)
{
    if (!(p_bs_watts >= 0.0))
        throw std::invalid_argument("bs_precoder_focus_ris: transmit power must be >= 0");
    const auto antennas = element_positions(bs);
    const double k = static_cast<int>(sign) * 2.0 * pi / lambda;
    CVector a(static_cast<Eigen::Index>(antennas.size()));
    for (std::size_t m = 0; m < antennas.size(); ++m)
    {
        const double phase = k * distance(antennas[m], p_ris);
        a(static_cast<Eigen::Index>(m)) = {std::cos(phase), std::sin(phase)};
    }
    return {std::sqrt(p_bs_watts) * a.conjugate() / a.norm()};
}

ProjectedChannels project(const ChannelSet &channels, const Precoder &precoder)
{
    if (channels.H.cols() != precoder.v.size() || channels.H1.cols() != precoder.v.size())
        throw std::invalid_argument("project: precoder length does not match N_bs");
    if (channels.H2.cols() != channels.H1.rows() || channels.H2.rows() != channels.H.rows())
        throw std::invalid_argument("project: inconsistent channel dimensions");
    return {channels.H * precoder.v, channels.H1 * precoder.v, channels.H2};
}

double received_snr(const ChannelSet &channels, const PhaseVector &omega, const Precoder &precoder,
                    const CombinerCodebook &combiners, double sigma2, double g)
{
    if (static_cast<Eigen::Index>(omega.size()) != channels.H1.rows())
        throw std::invalid_argument("received_snr: phase vector length does not match Q");
    const auto phasors = omega.phasors();
    return received_snr(project(channels, precoder), phasors, g, combiners, sigma2);
}

namespace
{

CVector effective_channel(const ProjectedChannels &ch, std::span<const cplx> ris_phasors, double g)
{
    if (static_cast<Eigen::Index>(ris_phasors.size()) != ch.h1.size())
        throw std::invalid_argument("received_snr: RIS profile length does not match Q");
    const Eigen::Map<const CVector> c(ris_phasors.data(), static_cast<Eigen::Index>(ris_phasors.size()));
    return ch.h_direct + g * (ch.H2 * c.cwiseProduct(ch.h1));
}

void check_inputs(const ProjectedChannels &ch, const CombinerCodebook &combiners, double sigma2)
{
    combiners.validate();
    if (static_cast<Eigen::Index>(combiners.antennas()) != ch.h_direct.size())
        throw std::invalid_argument("received_snr: combiner length does not match N_mu");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("received_snr: noise power must be positive");
}

} // namespace

double received_snr(const ProjectedChannels &channels, std::span<const cplx> ris_phasors, double g,
                    const CombinerCodebook &combiners, double sigma2)
{
    check_inputs(channels, combiners, sigma2);
    const CVector eff = effective_channel(channels, ris_phasors, g);
    double best = 0.0;
    for (const auto &u : combiners.combiners)
        best = std::max(best, std::norm(u.dot(eff))); // Eigen's dot conjugates the left operand
    return best / sigma2;
}

double measured_snr(const ProjectedChannels &channels, std::span<const cplx> ris_phasors, double g,
                    const CombinerCodebook &combiners, double sigma2, int repetitions, Rng &rng)
{
    check_inputs(channels, combiners, sigma2);
    if (repetitions < 1)
        throw std::invalid_argument("measured_snr: repetitions must be >= 1");
    const CVector eff = effective_channel(channels, ris_phasors, g);
    const double sigma = std::sqrt(sigma2);
    double best = 0.0;
    for (const auto &u : combiners.combiners)
    {
        const cplx a = u.dot(eff);
        cplx acc{0.0, 0.0};
        for (int r = 0; r < repetitions; ++r)
            acc += a + sigma * draw_cn01(rng);
        best = std::max(best, std::norm(acc / static_cast<double>(repetitions)));
    }
    return best / sigma2;
}

int best_index(const std::map<int, double> &snrs, const std::vector<int> &candidates)
{
    if (candidates.empty())
        throw std::invalid_argument("best_index: empty candidate set");
    int best = -1;
    double best_snr = 0.0;
    for (int c : candidates)
    {
        const auto it = snrs.find(c);
        if (it == snrs.end())
            throw std::invalid_argument("best_index: no measurement for candidate " + std::to_string(c));
        if (best < 0 || it->second > best_snr || (it->second == best_snr && c < best))
        {
            best = c;
            best_snr = it->second;
        }
    }
    return best;
}

SearchOutcome hierarchical_search(const HierarchicalCodebook &codebook, const SnrMeasurement &measure)
{
    if (codebook.levels.empty())
        throw std::invalid_argument("hierarchical_search: empty codebook");
    SearchOutcome out;
    CellIndex previous{};
    for (std::size_t w = 0; w < codebook.levels.size(); ++w)
    {
        const auto &level = codebook.levels[w];
        SearchTrace::Level lt;
        if (w == 0)
        {
            for (int f = 0; f < level.size.count(); ++f)
                lt.candidates.push_back(level.cell(f));
        }
        else
        {
            lt.candidates = children(codebook.levels[w - 1].size, level.size, previous);
        }
        std::map<int, double> snrs;
        std::vector<int> flat;
        flat.reserve(lt.candidates.size());
        for (const auto &c : lt.candidates)
        {
            const double s = measure(w, c, level.at(c));
            lt.snr_linear.push_back(s);
            snrs[level.flat(c)] = s;
            flat.push_back(level.flat(c));
        }
        lt.winner = level.cell(best_index(snrs, flat));
        out.trace.pilots += static_cast<int>(lt.candidates.size());
        previous = lt.winner;
        out.trace.levels.push_back(std::move(lt));
    }
    out.winner = previous;
    out.omega = codebook.levels.back().at(previous);
    return out;
}

SearchOutcome hierarchical_search(const ProjectedChannels &channels, const HierarchicalCodebook &codebook,
                                  const CombinerCodebook &combiners, double sigma2)
{
    const double g = unit_cell_gain(codebook.ris, codebook.lambda);
    return hierarchical_search(codebook, [&](std::size_t, CellIndex, const PhaseVector &omega) {
        const auto c = omega.phasors();
        return received_snr(channels, c, g, combiners, sigma2);
    });
}

std::string trace_to_json(const SearchTrace &trace)
{
    nlohmann::json j;
    j["format_version"] = 1;
    j["pilots"] = trace.pilots;
    nlohmann::json levels = nlohmann::json::array();
    for (const auto &l : trace.levels)
    {
        nlohmann::json jl;
        nlohmann::json cands = nlohmann::json::array();
        for (std::size_t i = 0; i < l.candidates.size(); ++i)
            cands.push_back({{"index", {l.candidates[i].x, l.candidates[i].y}},
                             {"snr_db", linear_to_db(l.snr_linear[i])}});
        jl["candidates"] = std::move(cands);
        jl["winner"] = {l.winner.x, l.winner.y};
        levels.push_back(std::move(jl));
    }
    j["levels"] = std::move(levels);
    return j.dump();
}

} // namespace nfris
