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

#ifndef NFRIS_SCENARIO_IO_HPP
#define NFRIS_SCENARIO_IO_HPP

#include "nfris/scenario.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace nfris
{

inline constexpr int scenario_format_version = 1;

enum class ConfigMode
{
    Strict, // unknown keys are errors
    Lax     // unknown keys are reported through `warnings`
};

/**
 * Parses a YAML scenario document. Units are spelled out in the key names (`_m`, `_ghz`, `_mhz`,
 * `_db`, `_dbm`). `carrier_frequency_ghz`, `bs.center_m`, `ris.center_m` and
 * `blockage_area.center_m` are required; everything else falls back to the reference deployment.
 * Throws ConfigError naming the offending key.
 */
Scenario parse_scenario(const std::string &text, ConfigMode mode = ConfigMode::Strict,
                        std::vector<std::string> *warnings = nullptr);

Scenario load_scenario(const std::string &path, ConfigMode mode = ConfigMode::Strict,
                       std::vector<std::string> *warnings = nullptr);

/// Emits every field; parse_scenario(save_scenario(s)) == s.
std::string save_scenario(const Scenario &scenario);

/// FNV-1a of the canonical serialization.
std::uint64_t scenario_hash(const Scenario &scenario);

} // namespace nfris

#endif
