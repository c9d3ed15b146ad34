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

#include "nfris/codebook.hpp"

#include <json.hpp>

#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace nfris
{

std::vector<cplx> PhaseVector::phasors() const
{
    std::vector<cplx> out(omega.size());
    for (std::size_t n = 0; n < omega.size(); ++n)
        out[n] = {std::cos(omega[n]), std::sin(omega[n])};
    return out;
}

void BlockageArea::validate() const
{
    if (!(r_x > 0.0) || !(r_y > 0.0))
        throw std::invalid_argument("BlockageArea: R_x and R_y must be positive");
    if (!center.is_finite())
        throw std::invalid_argument("BlockageArea: center must be finite");
}

bool BlockageArea::contains(const Position &p, double tol) const
{
    return std::abs(p.x - center.x) <= 0.5 * r_x + tol && std::abs(p.y - center.y) <= 0.5 * r_y + tol &&
           std::abs(p.z - center.z) <= tol;
}

const char *to_string(CellAnchor anchor) { return anchor == CellAnchor::Corner ? "corner" : "center"; }

CellAnchor cell_anchor_from_string(const std::string &name)
{
    if (name == "corner")
        return CellAnchor::Corner;
    if (name == "center")
        return CellAnchor::Center;
    throw std::invalid_argument("unknown cell anchor '" + name + "' (expected corner or center)");
}

double cell_offset(int w, int count, double extent, CellAnchor anchor)
{
    if (count < 1 || w < 0 || w >= count)
        throw std::out_of_range("cell index " + std::to_string(w) + " out of range [0, " + std::to_string(count) + ")");
    const double shift = anchor == CellAnchor::Center ? 0.5 : 0.0;
    return (w + shift) * extent / count - 0.5 * extent;
}

int CodebookLevel::flat(CellIndex c) const
{
    if (c.x < 0 || c.x >= size.x || c.y < 0 || c.y >= size.y)
        throw std::out_of_range("codeword index (" + std::to_string(c.x) + ", " + std::to_string(c.y) +
                                ") outside level " + std::to_string(size.x) + "x" + std::to_string(size.y));
    return c.x * size.y + c.y;
}

CellIndex CodebookLevel::cell(int flat_index) const
{
    if (flat_index < 0 || flat_index >= size.count())
        throw std::out_of_range("flat codeword index out of range");
    return {flat_index / size.y, flat_index % size.y};
}

double unit_cell_gain(const ArrayGeometry &ris, double lambda)
{
    return 4.0 * pi * ris.spacing_u * ris.spacing_v / (lambda * lambda);
}

cplx grcs(const Position &p_i, const Position &p_r, const PhaseVector &omega, const ArrayGeometry &ris,
          double lambda)
{
    const auto elements = element_positions(ris);
    if (omega.size() != elements.size())
        throw std::invalid_argument("grcs: phase vector length " + std::to_string(omega.size()) +
                                    " does not match Q = " + std::to_string(elements.size()));
    const double k = 2.0 * pi / lambda;
    cplx acc{0.0, 0.0};
    for (std::size_t n = 0; n < elements.size(); ++n)
    {
        const double phase = k * (distance(p_i, elements[n]) + distance(p_r, elements[n])) + omega.omega[n];
        acc += cplx{std::cos(phase), std::sin(phase)};
    }
    return unit_cell_gain(ris, lambda) * acc;
}

PhaseVector focusing_phases(const Position &p_i, const Position &p_b, const ArrayGeometry &ris, double lambda)
{
    const auto elements = element_positions(ris);
    const double k = 2.0 * pi / lambda;
    PhaseVector out;
    out.omega.reserve(elements.size());
    for (const auto &p_n : elements)
        out.omega.push_back(-k * (distance(p_i, p_n) + distance(p_b, p_n)));
    return out;
}

namespace
{

PlaneOffset offset_in_plane(const Position &p_n, const ArrayGeometry &ris)
{
    const Position d = p_n - ris.center;
    switch (ris.plane)
    {
    case Plane::YZ:
        return {d.y, d.z};
    case Plane::XZ:
        return {d.x, d.z};
    case Plane::XY:
        return {d.x, d.y};
    }
    return {0.0, 0.0};
}

void check_alpha(double alpha)
{
    if (!(alpha >= 0.0 && alpha <= 1.5))
        throw std::invalid_argument("alpha must lie in [0, 1.5]");
}

} // namespace

Position mapping(const Position &p_n, const BlockageArea &area, const ArrayGeometry &ris, CellIndex cell,
                 LevelSize size, double alpha, CellAnchor anchor)
{
    check_alpha(alpha);
    const double x_w = cell_offset(cell.x, size.x, area.r_x, anchor);
    const double y_w = cell_offset(cell.y, size.y, area.r_y, anchor);
    const double delta_x = alpha * area.r_x / size.x;
    const double delta_y = alpha * area.r_y / size.y;
    const PlaneOffset o = offset_in_plane(p_n, ris);
    // Ground x follows the RIS vertical axis, ground y the RIS horizontal axis.
    return area.center + Position{delta_x / ris.aperture_v() * o.v + x_w, delta_y / ris.aperture_u() * o.u + y_w, 0.0};
}

PhaseVector wide_illumination_phases(const Position &p_i, const BlockageArea &area, const ArrayGeometry &ris,
                                     double lambda, CellIndex cell, LevelSize size, double alpha, CellAnchor anchor)
{
    const auto elements = element_positions(ris);
    const double k = 2.0 * pi / lambda;
    PhaseVector out;
    out.omega.reserve(elements.size());
    for (const auto &p_n : elements)
    {
        const Position m = mapping(p_n, area, ris, cell, size, alpha, anchor);
        out.omega.push_back(-k * (distance(m, p_n) - distance(m, ris.center) + distance(p_i, p_n)));
    }
    return out;
}

HierarchicalCodebook build_hierarchy(const std::vector<LevelSize> &sizes, double alpha, const BlockageArea &area,
                                     const ArrayGeometry &ris, const Position &p_i, double lambda,
                                     CellAnchor anchor)
{
    if (sizes.empty())
        throw std::invalid_argument("build_hierarchy: at least one level is required");
    check_alpha(alpha);
    if (alpha > 1.0)
        std::clog << "warning: alpha = " << alpha << " > 1, neighbouring codewords overlap beyond cell edges\n";
    area.validate();
    ris.validate();
    for (std::size_t w = 0; w < sizes.size(); ++w)
    {
        if (sizes[w].x < 1 || sizes[w].y < 1)
            throw std::invalid_argument("build_hierarchy: level " + std::to_string(w + 1) + " has an empty grid");
        if (w == 0)
            continue;
        if (sizes[w].count() <= sizes[w - 1].count())
            throw std::invalid_argument("build_hierarchy: level sizes must increase strictly (level " +
                                        std::to_string(w + 1) + ")");
        if (sizes[w].x < sizes[w - 1].x || sizes[w].y < sizes[w - 1].y)
            throw std::invalid_argument("build_hierarchy: level " + std::to_string(w + 1) +
                                        " shrinks along an axis");
    }

    HierarchicalCodebook cb;
    cb.area = area;
    cb.anchor = anchor;
    cb.source = p_i;
    cb.ris = ris;
    cb.lambda = lambda;

    // The mapping depends only on the element, so share element positions and BS distances.
    const auto elements = element_positions(ris);
    std::vector<double> source_dist(elements.size());
    for (std::size_t n = 0; n < elements.size(); ++n)
        source_dist[n] = distance(p_i, elements[n]);
    const double k = 2.0 * pi / lambda;

    for (const auto &size : sizes)
    {
        CodebookLevel level{size, alpha, {}};
        level.codewords.reserve(static_cast<std::size_t>(size.count()));
        for (int f = 0; f < size.count(); ++f)
        {
            const CellIndex cell = level.cell(f);
            PhaseVector pv;
            pv.omega.resize(elements.size());
            for (std::size_t n = 0; n < elements.size(); ++n)
            {
                const Position m = mapping(elements[n], area, ris, cell, size, alpha, anchor);
                pv.omega[n] = -k * (distance(m, elements[n]) - distance(m, ris.center) + source_dist[n]);
            }
            level.codewords.push_back(std::move(pv));
        }
        cb.levels.push_back(std::move(level));
    }
    return cb;
}

std::vector<CellIndex> children(LevelSize parent_level, LevelSize child_level, CellIndex parent)
{
    if (parent_level.x < 1 || parent_level.y < 1 || child_level.x % parent_level.x != 0 ||
        child_level.y % parent_level.y != 0)
        throw std::invalid_argument("children: level " + std::to_string(child_level.x) + "x" +
                                    std::to_string(child_level.y) + " is not an integer refinement of " +
                                    std::to_string(parent_level.x) + "x" + std::to_string(parent_level.y));
    if (parent.x < 0 || parent.x >= parent_level.x || parent.y < 0 || parent.y >= parent_level.y)
        throw std::out_of_range("children: parent index outside its level");
    const int rx = child_level.x / parent_level.x;
    const int ry = child_level.y / parent_level.y;
    std::vector<CellIndex> out;
    out.reserve(static_cast<std::size_t>(rx * ry));
    for (int a = 0; a < rx; ++a)
        for (int b = 0; b < ry; ++b)
            out.push_back({parent.x * rx + a, parent.y * ry + b});
    return out;
}

GrcsField::GrcsField(const Position &p_i, const ArrayGeometry &ris, double lambda)
    : elements_(element_positions(ris)), k_(2.0 * pi / lambda), g_(unit_cell_gain(ris, lambda))
{
    source_dist_.reserve(elements_.size());
    for (const auto &p : elements_)
        source_dist_.push_back(distance(p_i, p));
}

std::vector<cplx> GrcsField::steering(const Position &p_r) const
{
    std::vector<cplx> s(elements_.size());
    for (std::size_t n = 0; n < elements_.size(); ++n)
    {
        const double phase = k_ * (source_dist_[n] + distance(p_r, elements_[n]));
        s[n] = {std::cos(phase), std::sin(phase)};
    }
    return s;
}

cplx GrcsField::evaluate(std::span<const cplx> steering, std::span<const cplx> codeword_phasors) const
{
    if (steering.size() != elements_.size() || codeword_phasors.size() != elements_.size())
        throw std::invalid_argument("GrcsField::evaluate: length mismatch");
    // Split accumulation keeps the loop vectorizable.
    double re = 0.0;
    double im = 0.0;
    for (std::size_t n = 0; n < elements_.size(); ++n)
    {
        const double a = steering[n].real(), b = steering[n].imag();
        const double c = codeword_phasors[n].real(), d = codeword_phasors[n].imag();
        re += a * c - b * d;
        im += a * d + b * c;
    }
    return g_ * cplx{re, im};
}

cplx GrcsField::evaluate(const Position &p_r, const PhaseVector &omega) const
{
    const auto s = steering(p_r);
    const auto c = omega.phasors();
    return evaluate(s, c);
}

double wrap_phase(double phase)
{
    double w = std::fmod(phase, 2.0 * pi);
    if (w < 0.0)
        w += 2.0 * pi;
    if (w >= 2.0 * pi)
        w = 0.0;
    return w;
}

void write_codebook_json(const HierarchicalCodebook &cb, std::ostream &os)
{
    nlohmann::json j;
    j["format_version"] = 1;
    j["units"] = {{"phase", "rad"}, {"length", "m"}};
    j["element_order"] = "row-major (q_y, q_z)";
    j["lambda"] = cb.lambda;
    j["anchor"] = to_string(cb.anchor);
    j["source"] = {cb.source.x, cb.source.y, cb.source.z};
    j["ris"] = {{"center", {cb.ris.center.x, cb.ris.center.y, cb.ris.center.z}},
                {"q_y", cb.ris.count_u},
                {"q_z", cb.ris.count_v},
                {"d_y", cb.ris.spacing_u},
                {"d_z", cb.ris.spacing_v}};
    j["area"] = {{"center", {cb.area.center.x, cb.area.center.y, cb.area.center.z}},
                 {"r_x", cb.area.r_x},
                 {"r_y", cb.area.r_y}};
    nlohmann::json levels = nlohmann::json::array();
    for (const auto &level : cb.levels)
    {
        nlohmann::json jl;
        jl["w_x"] = level.size.x;
        jl["w_y"] = level.size.y;
        jl["alpha"] = level.alpha;
        nlohmann::json words = nlohmann::json::array();
        for (int f = 0; f < level.size.count(); ++f)
        {
            const CellIndex c = level.cell(f);
            std::vector<double> wrapped;
            wrapped.reserve(level.codewords[static_cast<std::size_t>(f)].size());
            for (double w : level.codewords[static_cast<std::size_t>(f)].omega)
                wrapped.push_back(wrap_phase(w));
            words.push_back({{"index", {c.x, c.y}}, {"omega", std::move(wrapped)}});
        }
        jl["codewords"] = std::move(words);
        levels.push_back(std::move(jl));
    }
    j["levels"] = std::move(levels);
    os << j.dump() << '\n';
}

} // namespace nfris
