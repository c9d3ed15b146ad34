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

#ifndef NFRIS_BEAM_MGMT_HPP
#define NFRIS_BEAM_MGMT_HPP

#include "nfris/channel.hpp"
#include "nfris/codebook.hpp"
#include "nfris/random.hpp"

#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace nfris
{

/// BS transmit weights. Carries the transmit power: |v|^2 = P_bs.
struct Precoder
{
    CVector v;

    double power() const { return v.squaredNorm(); }
};

/// MU receive combiners, each of unit norm.
struct CombinerCodebook
{
    std::vector<CVector> combiners;

    void validate() const;
    std::size_t antennas() const { return combiners.empty() ? 0 : static_cast<std::size_t>(combiners.front().size()); }
};

/// Orthonormal DFT beams over an N_mu-element MU array; {[1]} for N_mu = 1.
CombinerCodebook dft_combiners(int n_mu);

/// Omega = diag(g exp(j omega_q)).
Eigen::DiagonalMatrix<cplx, Eigen::Dynamic> ris_profile(const PhaseVector &omega, double g);

/**
 * Fixed BS precoder focused on the RIS center: v = sqrt(P_bs) conj(a) / |a| with
 * a_m = exp(sign j 2pi/lambda |p_m - p_ris|), the response of BS antenna m toward p_ris under the
 * channel phase convention `sign`.
 */
Precoder bs_precoder_focus_ris(const ArrayGeometry &bs, const Position &p_ris, double lambda, double p_bs_watts,
                               PhaseSign sign = PhaseSign::Positive);

/// Channels as seen through a fixed precoder: H v, H1 v and H2.
struct ProjectedChannels
{
    CVector h_direct; // N_mu
    CVector h1;       // Q
    CMatrix H2;       // N_mu x Q
};

ProjectedChannels project(const ChannelSet &channels, const Precoder &precoder);

/// max_u |u^H (H + H2 Omega H1) v|^2 / sigma^2, linear.
double received_snr(const ChannelSet &channels, const PhaseVector &omega, const Precoder &precoder,
                    const CombinerCodebook &combiners, double sigma2, double g);

/// Same metric on pre-projected channels, with the RIS profile given as exp(j omega) phasors.
double received_snr(const ProjectedChannels &channels, std::span<const cplx> ris_phasors, double g,
                    const CombinerCodebook &combiners, double sigma2);

/**
 * Pilot-based SNR estimate: per combiner, `repetitions` unit pilots are received in AWGN of
 * variance sigma^2 and coherently averaged; returns the best |mean|^2 / sigma^2.
 */
double measured_snr(const ProjectedChannels &channels, std::span<const cplx> ris_phasors, double g,
                    const CombinerCodebook &combiners, double sigma2, int repetitions, Rng &rng);

/// argmax over `candidates`; ties go to the smallest index. Throws if a candidate has no measurement.
int best_index(const std::map<int, double> &snrs, const std::vector<int> &candidates);

struct SearchTrace
{
    struct Level
    {
        std::vector<CellIndex> candidates;
        std::vector<double> snr_linear; // parallel to candidates
        CellIndex winner;
    };
    std::vector<Level> levels;
    int pilots = 0;
};

struct SearchOutcome
{
    PhaseVector omega; // the last level's winning codeword
    CellIndex winner;
    SearchTrace trace;
};

/// Callback returning the SNR measured while the RIS holds codeword `cell` of level `level`.
using SnrMeasurement = std::function<double(std::size_t level, CellIndex cell, const PhaseVector &omega)>;

/**
 * Hierarchical beam search: full sweep of level 1, then only the children of the previous
 * winner on every later level. One measurement is one pilot.
 */
SearchOutcome hierarchical_search(const HierarchicalCodebook &codebook, const SnrMeasurement &measure);

/// Noise-free search on projected channels: every pilot reads the exact received SNR.
SearchOutcome hierarchical_search(const ProjectedChannels &channels, const HierarchicalCodebook &codebook,
                                  const CombinerCodebook &combiners, double sigma2);

/// JSON: per level candidates, SNRs in dB and the winner; plus the pilot total.
std::string trace_to_json(const SearchTrace &trace);

} // namespace nfris

#endif
