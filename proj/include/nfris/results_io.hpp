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

#ifndef NFRIS_RESULTS_IO_HPP
#define NFRIS_RESULTS_IO_HPP

#include "nfris/harness.hpp"

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace nfris
{

inline constexpr int results_format_version = 1;
inline constexpr const char *tool_version = "0.1.0";

/// Six significant digits; infinities as inf / -inf.
std::string format_number(double value);

/// Every CSV opens with a `# format_version: N` line followed by the header row.
void write_trials_csv(std::ostream &out, const std::vector<std::vector<TrialResult>> &results);

/// Wide table: one row per beta, a mean and a std column per scheme.
void write_aggregates_csv(std::ostream &out, const std::vector<AggregateRow> &rows);

/// Long-format raster (x_m, y_m, snr_db) in absolute coordinates; `origin` is added to the offsets.
void write_raster_csv(std::ostream &out, const std::vector<double> &xs, const std::vector<double> &ys,
                      const std::vector<double> &values, const Position &origin);

void write_cut_csv(std::ostream &out, Axis axis, const std::vector<CutPoint> &cut);

struct FarfieldRow
{
    double aperture_m;
    double frequency_hz;
    int elements_per_side;
    long elements;
    double far_field_m;
};

/// Square apertures of side L with elements at `spacing_wavelengths`; D is the diagonal.
std::vector<FarfieldRow> farfield_table(const std::vector<double> &apertures_m,
                                        const std::vector<double> &frequencies_hz, double spacing_wavelengths);

void write_farfield_csv(std::ostream &out, const std::vector<FarfieldRow> &rows);

struct RunManifest
{
    int format_version = results_format_version;
    std::string tool_version = nfris::tool_version;
    std::string subcommand;
    std::vector<std::string> command_line;
    std::uint64_t scenario_hash = 0;
    std::uint64_t seed = 0;
    std::string started_utc;
    std::string finished_utc;
    std::string scenario_yaml;
    std::vector<std::string> outputs;
};

std::string manifest_to_json(const RunManifest &manifest);
/// Throws std::runtime_error on malformed input or an unknown format_version.
RunManifest manifest_from_json(const std::string &text);

std::string utc_timestamp();

} // namespace nfris

#endif
