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

#ifndef NFRIS_HARNESS_HPP
#define NFRIS_HARNESS_HPP

#include "nfris/beam_mgmt.hpp"
#include "nfris/benchmarks.hpp"
#include "nfris/scenario.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace nfris
{

/// Per-realization outcome. `schemes` is indexed like `all_schemes`.
struct TrialResult
{
    int trial = 0;
    std::uint64_t seed = 0;
    double beta_db = 0.0;
    Position mu;
    std::array<SchemeResult, 4> schemes{};
    SearchTrace trace;

    const SchemeResult &at(Scheme s) const;
};

/// Random draws of one trial. None of them depend on beta, so one realization serves a whole sweep.
struct TrialRealization
{
    std::uint64_t seed = 0;
    Position mu;
    std::vector<Position> mu_antennas;
    LinkPaths bs_ris;
    LinkPaths ris_mu;
    LinkPaths bs_mu;
    std::vector<CVector> bs_ris_responses; // H1_i v, length Q
    std::vector<CVector> bs_mu_responses;  // H_i v, length N_mu
    std::vector<CMatrix> ris_mu_responses; // H2_i, N_mu x Q
};

struct AggregateRow
{
    Scheme scheme = Scheme::Hierarchical;
    double beta_db = 0.0;
    double mean_snr_db = 0.0;
    double std_snr_db = 0.0;
    int trials = 0;
};

/**
 * Campaign engine for one scenario: holds geometry, the BS precoder and the hierarchical codebook,
 * all built once and shared read-only by the workers.
 */
class Simulator
{
  public:
    explicit Simulator(Scenario scenario);

    const Scenario &scenario() const { return scenario_; }
    const HierarchicalCodebook &codebook() const { return codebook_; }
    const Precoder &precoder() const { return precoder_; }
    const ArrayGeometry &ris() const { return ris_; }
    double lambda() const { return lambda_; }
    double sigma2() const { return sigma2_; }
    double unit_gain() const { return g_; }

    TrialRealization draw(std::uint64_t trial_seed) const;

    /// Path lists of a realization after beta scaling and (for BS-MU) the blockage loss.
    std::array<LinkPaths, 3> scaled_links(const TrialRealization &r, double beta_db) const;
    ProjectedChannels channels(const TrialRealization &r, double beta_db) const;
    /// Full channel matrices of a realization (expensive: materializes H1).
    ChannelSet channel_set(const TrialRealization &r, double beta_db) const;

    TrialResult evaluate(const TrialRealization &r, double beta_db, int trial_index = 0) const;
    TrialResult run_trial(double beta_db, std::uint64_t trial_seed, int trial_index = 0) const;

    /**
     * Runs `trials` realizations for every beta. Output is ordered [beta][trial] and does not depend
     * on `workers`.
     */
    std::vector<std::vector<TrialResult>> sweep(const std::vector<double> &betas, int trials, int workers = 1) const;

    /// SNR of the GRCS link model: P_bs |PL_1 PL_2 g_ris(p_i, p_r)|^2 / sigma^2 (LOS only, BS as a point source).
    double grcs_snr(const Position &p_r, cplx g_ris) const;

  private:
    Scenario scenario_;
    double lambda_;
    double sigma2_;
    double g_;
    ArrayGeometry ris_;
    ArrayGeometry bs_;
    std::vector<Position> ris_elements_;
    std::vector<Position> bs_antennas_;
    Precoder precoder_;
    CombinerCodebook combiners_;
    HierarchicalCodebook codebook_;
    std::vector<std::vector<std::vector<cplx>>> phasors_; // [level][flat codeword][element]
};

TrialResult run_trial(const Scenario &scenario, double beta_db, std::uint64_t trial_seed);

/// One row per (scheme, beta), schemes in `all_schemes` order.
std::vector<AggregateRow> aggregate(const std::vector<std::vector<TrialResult>> &results, bool average_linear);

std::vector<AggregateRow> sweep_beta(const Scenario &scenario, int workers = 1);

enum class Axis
{
    X,
    Y
};

struct CutPoint
{
    double displacement;
    double snr_db;
};

/// Focus on p_b and scan p_r = p_b + delta e_axis for delta in [-range, range] (`steps` samples).
std::vector<CutPoint> focusing_cut(const Simulator &sim, Axis axis, double range, int steps);

/// Width of the contiguous region around the cut's peak within 3 dB of it (linear interpolation at the edges).
double main_lobe_width_3db(const std::vector<CutPoint> &cut);

struct Raster
{
    std::vector<double> xs; // offsets from p_b along x
    std::vector<double> ys; // offsets from p_b along y
    std::vector<CellIndex> cells;
    std::vector<std::vector<double>> snr_db; // per cell, row-major [ix * ys.size() + iy]
    std::vector<double> composite_db;        // pointwise max over cells

    double peak_db() const;
    double value(std::size_t cell, std::size_t ix, std::size_t iy) const { return snr_db[cell][ix * ys.size() + iy]; }
};

/**
 * GRCS-SNR rasters of the selected codewords of `level` (all when `cells` is empty) on an
 * nx x ny grid of cell-centered samples covering the blockage area.
 */
Raster heatmap(const Simulator &sim, std::size_t level, std::vector<CellIndex> cells, int nx, int ny,
               int workers = 1);

/// Same raster for an arbitrary phase profile (used for footprint comparisons).
std::vector<double> raster_for(const Simulator &sim, const PhaseVector &omega, const std::vector<double> &xs,
                               const std::vector<double> &ys);

/// Cell-centered sample offsets of n points over [-extent/2, extent/2].
std::vector<double> raster_axis(double extent, int n);

} // namespace nfris

#endif
