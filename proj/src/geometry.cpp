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

#include "nfris/geometry.hpp"

#include <stdexcept>
#include <string>

namespace nfris
{

void ArrayGeometry::validate() const
{
    if (count_u < 1 || count_v < 1)
        throw std::invalid_argument("ArrayGeometry: element counts must be >= 1 (got " +
                                    std::to_string(count_u) + " x " + std::to_string(count_v) + ")");
    if (!(spacing_u > 0.0) || !(spacing_v > 0.0) || !std::isfinite(spacing_u) || !std::isfinite(spacing_v))
        throw std::invalid_argument("ArrayGeometry: element spacings must be positive and finite");
    if (!center.is_finite())
        throw std::invalid_argument("ArrayGeometry: center must be finite");
}

ArrayGeometry make_ris(const Position &center, int q_y, int q_z, double d_y, double d_z)
{
    ArrayGeometry g{center, Plane::YZ, q_y, q_z, d_y, d_z};
    g.validate();
    return g;
}

ArrayGeometry make_bs_array(const Position &center, int n_x, int n_z, double d_x, double d_z)
{
    ArrayGeometry g{center, Plane::XZ, n_x, n_z, d_x, d_z};
    g.validate();
    return g;
}

int elements_for_aperture(double length, double spacing)
{
    if (!(length > 0.0) || !(spacing > 0.0))
        throw std::invalid_argument("elements_for_aperture: length and spacing must be positive");
    // Relative slack so that an aperture of exactly k spacings is not lost to rounding.
    const int n = static_cast<int>(std::floor(length / spacing * (1.0 + 1e-12)));
    if (n < 1)
        throw std::invalid_argument("elements_for_aperture: aperture shorter than one spacing");
    return n;
}

std::vector<PlaneOffset> element_offsets(const ArrayGeometry &geom)
{
    geom.validate();
    std::vector<PlaneOffset> out;
    out.reserve(static_cast<std::size_t>(geom.size()));
    const double mid_u = 0.5 * (geom.count_u - 1);
    const double mid_v = 0.5 * (geom.count_v - 1);
    for (int qu = 0; qu < geom.count_u; ++qu)
        for (int qv = 0; qv < geom.count_v; ++qv)
            out.push_back({(qu - mid_u) * geom.spacing_u, (qv - mid_v) * geom.spacing_v});
    return out;
}

std::vector<Position> element_positions(const ArrayGeometry &geom)
{
    const auto offsets = element_offsets(geom);
    std::vector<Position> out;
    out.reserve(offsets.size());
    for (const auto &o : offsets)
    {
        Position p = geom.center;
        switch (geom.plane)
        {
        case Plane::YZ:
            p.y += o.u;
            p.z += o.v;
            break;
        case Plane::XZ:
            p.x += o.u;
            p.z += o.v;
            break;
        case Plane::XY:
            p.x += o.u;
            p.y += o.v;
            break;
        }
        out.push_back(p);
    }
    return out;
}

double wavelength(double frequency_hz)
{
    if (!(frequency_hz > 0.0))
        throw std::invalid_argument("wavelength: frequency must be positive");
    return speed_of_light / frequency_hz;
}

double far_field_distance(double largest_dimension, double lambda)
{
    if (!(largest_dimension > 0.0) || !(lambda > 0.0))
        throw std::invalid_argument("far_field_distance: dimension and wavelength must be positive");
    return 2.0 * largest_dimension * largest_dimension / lambda;
}

} // namespace nfris
