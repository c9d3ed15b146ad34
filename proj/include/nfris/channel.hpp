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

#ifndef NFRIS_CHANNEL_HPP
#define NFRIS_CHANNEL_HPP

#include "nfris/geometry.hpp"
#include "nfris/random.hpp"

#include <Eigen/Dense>

#include <complex>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace nfris
{

using cplx = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

enum class PathKind
{
    LOS,
    NLOS
};

/// One propagation path: amplitude-domain pathloss PL_i and small-scale fading gamma_i.
struct Path
{
    PathKind kind = PathKind::LOS;
    std::optional<Position> scatterer; // set iff NLOS
    double amplitude = 0.0;
    cplx fading{1.0, 0.0};
};

enum class LinkKind
{
    BsRis,
    RisMu,
    BsMu
};

const char *to_string(LinkKind link);

/// Path list of one link. Index 0 is the LOS path.
struct LinkPaths
{
    LinkKind link = LinkKind::BsRis;
    std::vector<Path> paths;

    void validate() const;
    double los_power() const;  // PL_0^2
    double nlos_power() const; // sum_{i>=1} PL_i^2
};

/// The three channel matrices: H (N_mu x N_bs), H1 (Q x N_bs), H2 (N_mu x Q).
struct ChannelSet
{
    CMatrix H;
    CMatrix H1;
    CMatrix H2;
};

struct NoiseModel
{
    double psd_dbm_per_hz = -176.0;
    double bandwidth_hz = 100e6;
    double noise_figure_db = 6.0;

    bool operator==(const NoiseModel &) const = default;
};

/// Axis-aligned box [lo, hi].
struct Box
{
    Position lo;
    Position hi;

    bool operator==(const Box &) const = default;
};

/// Sign of the propagation phase exp(sign * j * 2 pi d / lambda).
enum class PhaseSign : int
{
    Positive = 1,
    Negative = -1
};

/// Amplitude-domain Friis factor lambda / (4 pi d).
double free_space_amplitude(double d, double lambda);

std::vector<Position> generate_scatterers(const Box &volume, int count, Rng &rng);

double path_length(const Position &a, const Path &path, const Position &b);

/**
 * Builds the spherical-wavefront channel of a link: entry (r, t) is
 * sum_i PL_i gamma_i exp(sign j 2pi/lambda len_i(tx_t, rx_r)), using exact per-element distances.
 */
CMatrix assemble_channel(const LinkPaths &link, std::span<const Position> tx, std::span<const Position> rx,
                         double lambda, PhaseSign sign);

/// assemble_channel(...) * tx_weights, without materializing the matrix.
CVector assemble_projected(const LinkPaths &link, std::span<const Position> tx, std::span<const Position> rx,
                           double lambda, PhaseSign sign, const CVector &tx_weights);

/**
 * Per-path unit responses of a link projected onto tx_weights: element i is
 * R_i * tx_weights with [R_i]_{r,t} = exp(sign j 2pi/lambda len_i(tx_t, rx_r)).
 * combine_paths() turns them back into a projected channel for any set of path gains.
 */
std::vector<CVector> projected_path_responses(const LinkPaths &link, std::span<const Position> tx,
                                              std::span<const Position> rx, double lambda, PhaseSign sign,
                                              const CVector &tx_weights);

/// sum_i PL_i gamma_i responses[i].
CVector combine_paths(const LinkPaths &link, const std::vector<CVector> &responses);

/**
 * Rescales all NLOS amplitudes by one common factor so that PL_0^2 / sum_{i>=1} PL_i^2 = 10^(beta/10).
 * beta_db = +inf removes the NLOS paths (amplitude 0). Throws when a finite beta is requested for
 * a link without NLOS power.
 */
LinkPaths apply_beta(LinkPaths link, double beta_db);

/// Multiplies every path amplitude by 10^(-loss_db/20). Throws on negative or non-finite loss.
LinkPaths blockage_attenuation(LinkPaths link, double loss_db);

/// Noise power in watts: 10^((psd + 10 log10 B + NF - 30) / 10).
double noise_power(const NoiseModel &model);

/**
 * LOS path between the reference points plus one NLOS path per scatterer. Amplitudes are the Friis
 * factor of the total path length; NLOS fading is CN(0,1) drawn from `fading_rng`.
 */
LinkPaths make_link_paths(LinkKind link, const Position &tx_ref, const Position &rx_ref,
                          std::span<const Position> scatterers, Rng &fading_rng, double lambda);

/// JSON dump: {"format_version", "H"|"H1"|"H2": {"rows","cols","data": [re, im, ...] row-major}}.
void write_channel_json(const ChannelSet &channels, std::ostream &os);
ChannelSet read_channel_json(std::istream &is);

double db_to_linear(double db);
double linear_to_db(double linear);

} // namespace nfris

#endif
