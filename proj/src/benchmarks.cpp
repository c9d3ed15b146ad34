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

#include "nfris/benchmarks.hpp"

#include <stdexcept>

namespace nfris
{

const char *to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::FullCsi:
        return "B3_full_csi";
    case Scheme::FullFocusing:
        return "B2_full_focusing";
    case Scheme::FullCodebook:
        return "B1_full_codebook";
    case Scheme::Hierarchical:
        return "proposed";
    }
    return "?";
}

SchemeResult make_result(Scheme scheme, double snr_linear, SchemeCost cost)
{
    return {scheme, snr_linear, linear_to_db(snr_linear), cost};
}

SchemeResult benchmark1_full_search(const ProjectedChannels &channels, const CodebookLevel &level, double g,
                                    const CombinerCodebook &combiners, double sigma2)
{
    if (level.codewords.empty())
        throw std::invalid_argument("benchmark1_full_search: empty level");
    double best = 0.0;
    for (const auto &cw : level.codewords)
    {
        const auto c = cw.phasors();
        best = std::max(best, received_snr(channels, c, g, combiners, sigma2));
    }
    return make_result(Scheme::FullCodebook, best, {static_cast<int>(level.codewords.size()), false, 0});
}

SchemeResult benchmark2_full_focusing(const ProjectedChannels &channels, const Position &p_mu,
                                      const ArrayGeometry &ris, const Position &p_i,
                                      const CombinerCodebook &combiners, double sigma2, double lambda)
{
    const auto c = focusing_phases(p_i, p_mu, ris, lambda).phasors();
    const double snr = received_snr(channels, c, unit_cell_gain(ris, lambda), combiners, sigma2);
    return make_result(Scheme::FullFocusing, snr, {0, true, 0});
}

FullCsiResult benchmark3_full_csi(const CVector &h1, const CVector &h2, cplx h_direct, double g, double sigma2)
{
    if (h1.size() != h2.size() || h1.size() == 0)
        throw std::invalid_argument("benchmark3_full_csi: h1 and h2 must be non-empty and of equal length "
                                    "(single-antenna MU only)");
    if (!(sigma2 > 0.0))
        throw std::invalid_argument("benchmark3_full_csi: noise power must be positive");
    FullCsiResult out;
    out.omega.omega.resize(static_cast<std::size_t>(h1.size()));
    cplx acc{0.0, 0.0};
    for (Eigen::Index q = 0; q < h1.size(); ++q)
    {
        const double w = -std::arg(h1(q)) - std::arg(h2(q));
        out.omega.omega[static_cast<std::size_t>(q)] = w;
        acc += h2(q) * h1(q) * cplx{std::cos(w), std::sin(w)};
    }
    out.cascaded_gain = g * acc;
    out.result = make_result(Scheme::FullCsi, std::norm(h_direct + out.cascaded_gain) / sigma2,
                             {0, false, 2L * h1.size()});
    return out;
}

} // namespace nfris
