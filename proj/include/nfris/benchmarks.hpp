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

#ifndef NFRIS_BENCHMARKS_HPP
#define NFRIS_BENCHMARKS_HPP

#include "nfris/beam_mgmt.hpp"

#include <array>
#include <string>

namespace nfris
{

enum class Scheme
{
    FullCsi,        // B3
    FullFocusing,   // B2
    FullCodebook,   // B1
    Hierarchical,   // the proposed search
};

inline constexpr std::array<Scheme, 4> all_schemes{Scheme::FullCsi, Scheme::FullFocusing, Scheme::FullCodebook,
                                                   Scheme::Hierarchical};

const char *to_string(Scheme s);

/// What a scheme needs to know or spend to reach its SNR.
struct SchemeCost
{
    int pilots = 0;
    bool needs_position = false;
    long channel_coefficients = 0;
};

struct SchemeResult
{
    Scheme scheme = Scheme::Hierarchical;
    double snr_linear = 0.0;
    double snr_db = 0.0;
    SchemeCost cost;
};

SchemeResult make_result(Scheme scheme, double snr_linear, SchemeCost cost);

/// Exhaustive search over one codebook level. Cost: one pilot per codeword.
SchemeResult benchmark1_full_search(const ProjectedChannels &channels, const CodebookLevel &level, double g,
                                    const CombinerCodebook &combiners, double sigma2);

/// RIS focuses on the exactly known MU position p_mu.
SchemeResult benchmark2_full_focusing(const ProjectedChannels &channels, const Position &p_mu,
                                      const ArrayGeometry &ris, const Position &p_i,
                                      const CombinerCodebook &combiners, double sigma2, double lambda);

struct FullCsiResult
{
    SchemeResult result;
    PhaseVector omega;
    cplx cascaded_gain; // g sum_q h2_q h1_q exp(j omega_q)
};

/**
 * Single-antenna MU with full CSI: omega_q = -angle(h1_q) - angle(h2_q). The direct link is left
 * out of the phase choice but included in the SNR. Cost: 2 Q channel coefficients.
 */
FullCsiResult benchmark3_full_csi(const CVector &h1, const CVector &h2, cplx h_direct, double g, double sigma2);

} // namespace nfris

#endif
