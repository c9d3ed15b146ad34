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

#ifndef NFRIS_GEOMETRY_HPP
#define NFRIS_GEOMETRY_HPP

#include <cmath>
#include <vector>

namespace nfris
{

inline constexpr double speed_of_light = 299792458.0; // m/s
inline constexpr double pi = 3.14159265358979323846;

/// Point in the global right-handed Cartesian frame, meters.
struct Position
{
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Position operator+(const Position &o) const { return {x + o.x, y + o.y, z + o.z}; }
    constexpr Position operator-(const Position &o) const { return {x - o.x, y - o.y, z - o.z}; }
    constexpr Position operator*(double s) const { return {x * s, y * s, z * s}; }
    constexpr bool operator==(const Position &) const = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool is_finite() const { return std::isfinite(x) && std::isfinite(y) && std::isfinite(z); }
};

inline double distance(const Position &a, const Position &b) { return (a - b).norm(); }

/// Plane spanned by an array. The first named axis is the "u" axis, the second the "v" axis.
enum class Plane
{
    YZ, // u = y, v = z (RIS)
    XZ, // u = x, v = z (BS)
    XY  // u = x, v = y
};

/**
 * Uniform rectangular array centered at `center`.
 *
 * Element n sits at grid cell (q_u, q_v) with n = q_u * count_v + q_v (row-major). This
 * ordering is canonical: every phase vector and channel row/column indexed by element
 * uses it.
 */
struct ArrayGeometry
{
    Position center;
    Plane plane = Plane::YZ;
    int count_u = 1;
    int count_v = 1;
    double spacing_u = 0.0;
    double spacing_v = 0.0;

    int size() const { return count_u * count_v; }
    double aperture_u() const { return count_u * spacing_u; }
    double aperture_v() const { return count_v * spacing_v; }

    /// Throws std::invalid_argument on zero counts, non-positive spacings or a non-finite center.
    void validate() const;
};

/// RIS on the y-z plane: Q_y elements along y (spacing d_y), Q_z along z (spacing d_z).
ArrayGeometry make_ris(const Position &center, int q_y, int q_z, double d_y, double d_z);

/// Square BS array on the x-z plane.
ArrayGeometry make_bs_array(const Position &center, int n_x, int n_z, double d_x, double d_z);

/// Number of elements with spacing `spacing` that fit in an aperture `length`, i.e. floor(L/d).
int elements_for_aperture(double length, double spacing);

std::vector<Position> element_positions(const ArrayGeometry &geom);

/// Offsets of element n from the array center along the (u, v) in-plane axes.
struct PlaneOffset
{
    double u;
    double v;
};
std::vector<PlaneOffset> element_offsets(const ArrayGeometry &geom);

double wavelength(double frequency_hz);

/// Near/far-field boundary 2 D^2 / lambda for largest aperture dimension D.
double far_field_distance(double largest_dimension, double lambda);

} // namespace nfris

#endif
