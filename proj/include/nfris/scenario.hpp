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

#ifndef NFRIS_SCENARIO_HPP
#define NFRIS_SCENARIO_HPP

#include "nfris/channel.hpp"
#include "nfris/codebook.hpp"

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace nfris
{

/// Invalid scenario field. `field()` is the dotted key path, e.g. "power.bandwidth_mhz".
/**
 * Propagation phase sign per link. `Positive` and `Negative` apply one sign to every link;
 * `AsPrinted` uses +j on BS-RIS and -j on RIS-MU and BS-MU. Codewords are designed for `Positive`.
 */
enum class PhaseConvention
{
    Positive,
    Negative,
    AsPrinted
};

const char *to_string(PhaseConvention c);
PhaseConvention phase_convention_from_string(const std::string &name);

class ConfigError : public std::runtime_error
{
  public:
    ConfigError(std::string field, const std::string &message)
        : std::runtime_error(field + ": " + message), field_(std::move(field))
    {
    }
    const std::string &field() const { return field_; }

  private:
    std::string field_;
};

/// Full experiment description. Defaults reproduce the reference 28 GHz deployment.
struct Scenario
{
    double carrier_frequency_hz = 28e9;

    Position bs_center{40.0, 0.0, 10.0};
    int bs_elements_x = 8;
    int bs_elements_z = 8;
    double bs_spacing_wavelengths = 0.5;

    Position ris_center{0.0, 40.0, 5.0};
    double ris_size_y = 0.5; // m
    double ris_size_z = 0.5; // m
    double ris_spacing_wavelengths = 0.5;

    int mu_antennas = 1; // ULA along x, centered at the MU position
    double mu_spacing_wavelengths = 0.5;

    BlockageArea area{{20.0, 40.0, 1.0}, 16.0, 16.0};
    double blockage_loss_db = 20.0;

    // Total path counts per link, LOS included.
    int paths_bs_ris = 21;
    int paths_ris_mu = 21;
    int paths_bs_mu = 21;
    Box scatterer_volume{{0.0, 0.0, 0.0}, {60.0, 60.0, 10.0}};
    PhaseConvention phase_convention = PhaseConvention::Positive;

    double p_bs_dbm = 20.0;
    NoiseModel noise{-176.0, 100e6, 6.0};

    std::vector<LevelSize> levels{{4, 4}, {8, 8}, {8, 16}, {8, 32}};
    double alpha = 0.8;
    CellAnchor anchor = CellAnchor::Center;

    bool noisy_measurement = false;
    int measurement_repetitions = 8;

    std::vector<double> beta_db{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
    int trials = 100;
    std::uint64_t seed = 1;
    bool average_linear = false; // false: mean of per-trial dB values

    bool operator==(const Scenario &) const = default;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    PhaseSign sign(LinkKind link) const;
    double lambda() const;
    ArrayGeometry ris_geometry() const;
    ArrayGeometry bs_geometry() const;
    double p_bs_watts() const;
    double sigma2() const;
};

} // namespace nfris

#endif
