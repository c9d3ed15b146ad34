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

#include "nfris/scenario.hpp"

#include <cmath>

namespace nfris
{

namespace
{

void require(bool ok, const char *field, const char *message)
{
    if (!ok)
        throw ConfigError(field, message);
}

bool finite(const Position &p) { return p.is_finite(); }

} // namespace

void Scenario::validate() const
{
    require(carrier_frequency_hz > 0.0 && std::isfinite(carrier_frequency_hz), "carrier_frequency_ghz",
            "must be positive");
    require(finite(bs_center), "bs.center_m", "must be finite");
    require(bs_elements_x >= 1 && bs_elements_z >= 1, "bs.elements", "counts must be >= 1");
    require(bs_spacing_wavelengths > 0.0, "bs.spacing_wavelengths", "must be positive");
    require(finite(ris_center), "ris.center_m", "must be finite");
    require(ris_size_y > 0.0 && ris_size_z > 0.0, "ris.size_m", "must be positive");
    require(ris_spacing_wavelengths > 0.0, "ris.spacing_wavelengths", "must be positive");
    require(ris_size_y >= ris_spacing_wavelengths * lambda() && ris_size_z >= ris_spacing_wavelengths * lambda(),
            "ris.size_m", "aperture must hold at least one element per axis");
    require(mu_antennas >= 1, "mu.antennas", "must be >= 1");
    require(mu_spacing_wavelengths > 0.0, "mu.spacing_wavelengths", "must be positive");
    require(finite(area.center), "blockage_area.center_m", "must be finite");
    require(area.r_x > 0.0 && area.r_y > 0.0, "blockage_area.size_m", "must be positive");
    require(blockage_loss_db >= 0.0, "blockage_area.loss_db", "must be >= 0");
    require(paths_bs_ris >= 1, "channel.paths.bs_ris", "must be >= 1 (LOS included)");
    require(paths_ris_mu >= 1, "channel.paths.ris_mu", "must be >= 1 (LOS included)");
    require(paths_bs_mu >= 1, "channel.paths.bs_mu", "must be >= 1 (LOS included)");
    require(finite(scatterer_volume.lo) && finite(scatterer_volume.hi), "channel.scatterer_volume_m",
            "must be finite");
    require(scatterer_volume.lo.x <= scatterer_volume.hi.x && scatterer_volume.lo.y <= scatterer_volume.hi.y &&
                scatterer_volume.lo.z <= scatterer_volume.hi.z,
            "channel.scatterer_volume_m", "min must not exceed max");
    require(std::isfinite(p_bs_dbm), "power.bs_dbm", "must be finite");
    require(std::isfinite(noise.psd_dbm_per_hz), "power.noise_psd_dbm_per_hz", "must be finite");
    require(noise.bandwidth_hz > 0.0, "power.bandwidth_mhz", "must be positive");
    require(noise.noise_figure_db >= 0.0, "power.noise_figure_db", "must be >= 0");
    require(!levels.empty(), "codebook.levels", "at least one level is required");
    for (std::size_t w = 0; w < levels.size(); ++w)
    {
        require(levels[w].x >= 1 && levels[w].y >= 1, "codebook.levels", "grid sizes must be >= 1");
        if (w == 0)
            continue;
        require(levels[w].count() > levels[w - 1].count(), "codebook.levels", "sizes must increase strictly");
        require(levels[w].x % levels[w - 1].x == 0 && levels[w].y % levels[w - 1].y == 0, "codebook.levels",
                "each level must refine the previous one by integer ratios");
    }
    require(alpha >= 0.0 && alpha <= 1.5, "codebook.alpha", "must lie in [0, 1.5]");
    require(measurement_repetitions >= 1, "search.repetitions", "must be >= 1");
    require(!beta_db.empty(), "campaign.beta_db", "at least one value is required");
    for (double b : beta_db)
        require(!std::isnan(b) && b != -INFINITY, "campaign.beta_db", "values must be numbers (inf allowed)");
    require(trials >= 1, "campaign.trials", "must be >= 1");
}

const char *to_string(PhaseConvention c)
{
    switch (c)
    {
    case PhaseConvention::Positive:
        return "positive";
    case PhaseConvention::Negative:
        return "negative";
    case PhaseConvention::AsPrinted:
        return "as_printed";
    }
    return "?";
}

PhaseConvention phase_convention_from_string(const std::string &name)
{
    for (auto c : {PhaseConvention::Positive, PhaseConvention::Negative, PhaseConvention::AsPrinted})
        if (name == to_string(c))
            return c;
    throw std::invalid_argument("unknown phase convention '" + name + "' (expected positive, negative or as_printed)");
}

PhaseSign Scenario::sign(LinkKind link) const
{
    switch (phase_convention)
    {
    case PhaseConvention::Positive:
        return PhaseSign::Positive;
    case PhaseConvention::Negative:
        return PhaseSign::Negative;
    case PhaseConvention::AsPrinted:
        return link == LinkKind::BsRis ? PhaseSign::Positive : PhaseSign::Negative;
    }
    return PhaseSign::Positive;
}

double Scenario::lambda() const { return wavelength(carrier_frequency_hz); }

ArrayGeometry Scenario::ris_geometry() const
{
    const double d = ris_spacing_wavelengths * lambda();
    return make_ris(ris_center, elements_for_aperture(ris_size_y, d), elements_for_aperture(ris_size_z, d), d, d);
}

ArrayGeometry Scenario::bs_geometry() const
{
    const double d = bs_spacing_wavelengths * lambda();
    return make_bs_array(bs_center, bs_elements_x, bs_elements_z, d, d);
}

double Scenario::p_bs_watts() const { return std::pow(10.0, (p_bs_dbm - 30.0) / 10.0); }

double Scenario::sigma2() const { return noise_power(noise); }

} // namespace nfris
