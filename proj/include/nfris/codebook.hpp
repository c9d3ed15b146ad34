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

#ifndef NFRIS_CODEBOOK_HPP
#define NFRIS_CODEBOOK_HPP

#include "nfris/channel.hpp"
#include "nfris/geometry.hpp"

#include <compare>
#include <iosfwd>
#include <string>
#include <span>
#include <vector>

namespace nfris
{

/// RIS phase shifts in radians, canonical element order.
struct PhaseVector
{
    std::vector<double> omega;

    std::size_t size() const { return omega.size(); }
    /// exp(j omega_n) for every element.
    std::vector<cplx> phasors() const;
};

/// Rectangle {center + [x, y, 0] : |x| <= R_x/2, |y| <= R_y/2}.
struct BlockageArea
{
    Position center;
    double r_x = 16.0;
    double r_y = 16.0;

    void validate() const;
    bool contains(const Position &p, double tol = 1e-9) const;
    bool operator==(const BlockageArea &) const = default;
};

/// Grid resolution (W_x, W_y) of one codebook level.
struct LevelSize
{
    int x = 1;
    int y = 1;

    int count() const { return x * y; }
    constexpr bool operator==(const LevelSize &) const = default;
};

/// Codeword index (w_x, w_y). Flattened as w_x * W_y + w_y.
struct CellIndex
{
    int x = 0;
    int y = 0;

    constexpr auto operator<=>(const CellIndex &) const = default;
};

/**
 * Where the illumination center t_w of cell w sits.
 *
 * Corner: t_w = w R / W - R / 2. Illumination centers sit on the lower cell edges and the
 * codebook covers [-R/2 - Delta/2, R/2 - R/W + Delta/2].
 * Center: t_w = (w + 1/2) R / W - R / 2, so every codeword is centered on the cell it
 * is indexed by and child cells tile their parent's illumination footprint.
 */
enum class CellAnchor
{
    Corner,
    Center
};

const char *to_string(CellAnchor anchor);
CellAnchor cell_anchor_from_string(const std::string &name);

/// Offset t_w of cell w of W along an axis of length R.
double cell_offset(int w, int count, double extent, CellAnchor anchor);

struct CodebookLevel
{
    LevelSize size;
    double alpha = 0.8;
    std::vector<PhaseVector> codewords; // flat order w_x * W_y + w_y

    int flat(CellIndex c) const;
    CellIndex cell(int flat_index) const;
    const PhaseVector &at(CellIndex c) const { return codewords.at(static_cast<std::size_t>(flat(c))); }
};

struct HierarchicalCodebook
{
    std::vector<CodebookLevel> levels;
    BlockageArea area;
    CellAnchor anchor = CellAnchor::Center;
    Position source; // p_i, the BS reference point the codewords were designed for
    ArrayGeometry ris;
    double lambda = 0.0;
};

/// Per-element unit factor g = 4 pi d_y d_z / lambda^2.
double unit_cell_gain(const ArrayGeometry &ris, double lambda);

/// GRCS g_ris(p_i, p_r) = g sum_n exp(j 2pi/lambda (|p_i - p_n| + |p_r - p_n|)) exp(j omega_n).
cplx grcs(const Position &p_i, const Position &p_r, const PhaseVector &omega, const ArrayGeometry &ris,
          double lambda);

/// Phase-conjugate profile that makes every GRCS summand at p_b real positive (|g_ris| = g Q).
PhaseVector focusing_phases(const Position &p_i, const Position &p_b, const ArrayGeometry &ris, double lambda);

/**
 * Maps RIS element p_n onto the blockage area for codeword `cell` of a level with `size` cells:
 * M(p_n) = p_b + [Delta_x / L_v * v + x_w, Delta_y / L_u * u + y_w, 0], where (u, v) are the
 * element's in-plane offsets from the RIS center (y and z for a y-z RIS) and Delta_t = alpha R_t / W_t.
 */
Position mapping(const Position &p_n, const BlockageArea &area, const ArrayGeometry &ris, CellIndex cell,
                 LevelSize size, double alpha, CellAnchor anchor = CellAnchor::Corner);

/// Wide-illumination profile omega_n = -2pi/lambda (|M - p_n| - |M - p_ris| + |p_i - p_n|).
PhaseVector wide_illumination_phases(const Position &p_i, const BlockageArea &area, const ArrayGeometry &ris,
                                     double lambda, CellIndex cell, LevelSize size, double alpha,
                                     CellAnchor anchor = CellAnchor::Corner);

/// Materializes every level. Levels must grow strictly in size and be componentwise non-decreasing.
HierarchicalCodebook build_hierarchy(const std::vector<LevelSize> &sizes, double alpha, const BlockageArea &area,
                                     const ArrayGeometry &ris, const Position &p_i, double lambda,
                                     CellAnchor anchor = CellAnchor::Center);

/// Child cells of `parent` that tile it; sizes must divide. Ordered lexicographically.
std::vector<CellIndex> children(LevelSize parent_level, LevelSize child_level, CellIndex parent);

/**
 * GRCS observation helper for rasters: caches element positions and the BS-side distances so
 * that each observation point costs one steering vector and each codeword one dot product.
 */
class GrcsField
{
  public:
    GrcsField(const Position &p_i, const ArrayGeometry &ris, double lambda);

    /// s_n = exp(j 2pi/lambda (|p_i - p_n| + |p_r - p_n|)).
    std::vector<cplx> steering(const Position &p_r) const;
    /// g sum_n s_n c_n for codeword phasors c_n = exp(j omega_n).
    cplx evaluate(std::span<const cplx> steering, std::span<const cplx> codeword_phasors) const;
    cplx evaluate(const Position &p_r, const PhaseVector &omega) const;

    double unit_gain() const { return g_; }
    std::size_t size() const { return elements_.size(); }

  private:
    std::vector<Position> elements_;
    std::vector<double> source_dist_;
    double k_;
    double g_;
};

/// JSON export of level specs, alpha, area and per-codeword phases wrapped into [0, 2pi).
void write_codebook_json(const HierarchicalCodebook &cb, std::ostream &os);

double wrap_phase(double phase);

} // namespace nfris

#endif
