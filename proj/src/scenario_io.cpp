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

#include "nfris/scenario_io.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <set>
#include <sstream>

namespace nfris
{

namespace
{

/// Walks one YAML mapping, remembering which keys were consumed.
class Section
{
  public:
    Section(YAML::Node node, std::string path, ConfigMode mode, std::vector<std::string> *warnings)
        : node_(std::move(node)), path_(std::move(path)), mode_(mode), warnings_(warnings)
    {
        if (present() && !node_.IsMap())
            throw ConfigError(path_.empty() ? "<root>" : path_, "expected a mapping");
    }

    ~Section() = default;

    std::string key_path(const std::string &key) const { return path_.empty() ? key : path_ + "." + key; }

    bool has(const std::string &key)
    {
        seen_.insert(key);
        return present() && static_cast<const YAML::Node &>(node_)[key];
    }

    /// An absent or null section reads as empty.
    bool present() const { return node_.IsDefined() && !node_.IsNull(); }

    template <typename T> T get(const std::string &key, const T &fallback)
    {
        if (!has(key))
            return fallback;
        return convert<T>(node_[key], key_path(key));
    }

    template <typename T> T require(const std::string &key)
    {
        if (!has(key))
            throw ConfigError(key_path(key), "missing required key");
        return convert<T>(node_[key], key_path(key));
    }

    Section child(const std::string &key, bool required = false)
    {
        if (!has(key))
        {
            if (required)
                throw ConfigError(key_path(key), "missing required section");
            return {YAML::Node(), key_path(key), mode_, warnings_};
        }
        return {node_[key], key_path(key), mode_, warnings_};
    }

    Position position(const std::string &key, const Position &fallback, bool required = false)
    {
        if (!has(key))
        {
            if (required)
                throw ConfigError(key_path(key), "missing required key");
            return fallback;
        }
        const auto v = convert<std::vector<double>>(node_[key], key_path(key));
        if (v.size() != 3)
            throw ConfigError(key_path(key), "expected [x, y, z]");
        return {v[0], v[1], v[2]};
    }

    std::pair<double, double> pair(const std::string &key, std::pair<double, double> fallback)
    {
        if (!has(key))
            return fallback;
        const auto v = convert<std::vector<double>>(node_[key], key_path(key));
        if (v.size() != 2)
            throw ConfigError(key_path(key), "expected a two-element list");
        return {v[0], v[1]};
    }

    /// Rejects (strict) or reports (lax) keys nobody asked for.
    void finish()
    {
        if (!present())
            return;
        for (const auto &kv : node_)
        {
            const auto key = kv.first.as<std::string>();
            if (seen_.count(key))
                continue;
            if (mode_ == ConfigMode::Strict)
                throw ConfigError(key_path(key), "unknown key");
            if (warnings_)
                warnings_->push_back(key_path(key) + ": unknown key ignored");
        }
    }

  private:
    template <typename T> static T convert(const YAML::Node &n, const std::string &where)
    {
        try
        {
            return n.as<T>();
        }
        catch (const YAML::Exception &)
        {
            throw ConfigError(where, "value has the wrong type");
        }
    }

    YAML::Node node_;
    std::string path_;
    ConfigMode mode_;
    std::vector<std::string> *warnings_;
    std::set<std::string> seen_;
};

} // namespace

Scenario parse_scenario(const std::string &text, ConfigMode mode, std::vector<std::string> *warnings)
{
    YAML::Node root;
    try
    {
        root = YAML::Load(text);
    }
    catch (const YAML::Exception &e)
    {
        throw ConfigError("<document>", std::string("YAML syntax error: ") + e.what());
    }
    if (!root || root.IsNull())
        throw ConfigError("<document>", "empty scenario");

    Scenario s;
    Section top(root, "", mode, warnings);
    const int version = top.get<int>("format_version", scenario_format_version);
    if (version != scenario_format_version)
        throw ConfigError("format_version", "unsupported version " + std::to_string(version));
    s.carrier_frequency_hz = top.require<double>("carrier_frequency_ghz") * 1e9;

    {
        Section bs = top.child("bs", true);
        s.bs_center = bs.position("center_m", s.bs_center, true);
        const auto [nx, nz] = bs.pair("elements", {s.bs_elements_x, s.bs_elements_z});
        s.bs_elements_x = static_cast<int>(nx);
        s.bs_elements_z = static_cast<int>(nz);
        if (s.bs_elements_x != nx || s.bs_elements_z != nz)
            throw ConfigError("bs.elements", "counts must be integers");
        s.bs_spacing_wavelengths = bs.get<double>("spacing_wavelengths", s.bs_spacing_wavelengths);
        bs.finish();
    }
    {
        Section ris = top.child("ris", true);
        s.ris_center = ris.position("center_m", s.ris_center, true);
        const auto [ly, lz] = ris.pair("size_m", {s.ris_size_y, s.ris_size_z});
        s.ris_size_y = ly;
        s.ris_size_z = lz;
        s.ris_spacing_wavelengths = ris.get<double>("spacing_wavelengths", s.ris_spacing_wavelengths);
        ris.finish();
    }
    {
        Section mu = top.child("mu");
        s.mu_antennas = mu.get<int>("antennas", s.mu_antennas);
        s.mu_spacing_wavelengths = mu.get<double>("spacing_wavelengths", s.mu_spacing_wavelengths);
        mu.finish();
    }
    {
        Section area = top.child("blockage_area", true);
        s.area.center = area.position("center_m", s.area.center, true);
        const auto [rx, ry] = area.pair("size_m", {s.area.r_x, s.area.r_y});
        s.area.r_x = rx;
        s.area.r_y = ry;
        s.blockage_loss_db = area.get<double>("loss_db", s.blockage_loss_db);
        area.finish();
    }
    {
        Section ch = top.child("channel");
        {
            Section paths = ch.child("paths");
            s.paths_bs_ris = paths.get<int>("bs_ris", s.paths_bs_ris);
            s.paths_ris_mu = paths.get<int>("ris_mu", s.paths_ris_mu);
            s.paths_bs_mu = paths.get<int>("bs_mu", s.paths_bs_mu);
            paths.finish();
        }
        {
            Section vol = ch.child("scatterer_volume_m");
            s.scatterer_volume.lo = vol.position("min", s.scatterer_volume.lo);
            s.scatterer_volume.hi = vol.position("max", s.scatterer_volume.hi);
            vol.finish();
        }
        try
        {
            s.phase_convention =
                phase_convention_from_string(ch.get<std::string>("phase_sign", to_string(s.phase_convention)));
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError("channel.phase_sign", e.what());
        }
        ch.finish();
    }
    {
        Section pw = top.child("power");
        s.p_bs_dbm = pw.get<double>("bs_dbm", s.p_bs_dbm);
        s.noise.psd_dbm_per_hz = pw.get<double>("noise_psd_dbm_per_hz", s.noise.psd_dbm_per_hz);
        s.noise.bandwidth_hz = pw.get<double>("bandwidth_mhz", s.noise.bandwidth_hz / 1e6) * 1e6;
        s.noise.noise_figure_db = pw.get<double>("noise_figure_db", s.noise.noise_figure_db);
        pw.finish();
    }
    {
        Section cb = top.child("codebook");
        if (cb.has("levels"))
        {
            const auto raw = cb.get<std::vector<std::vector<int>>>("levels", {});
            s.levels.clear();
            for (const auto &l : raw)
            {
                if (l.size() != 2)
                    throw ConfigError("codebook.levels", "each level is [W_x, W_y]");
                s.levels.push_back({l[0], l[1]});
            }
        }
        s.alpha = cb.get<double>("alpha", s.alpha);
        try
        {
            s.anchor = cell_anchor_from_string(cb.get<std::string>("anchor", to_string(s.anchor)));
        }
        catch (const std::invalid_argument &e)
        {
            throw ConfigError("codebook.anchor", e.what());
        }
        cb.finish();
    }
    {
        Section search = top.child("search");
        s.noisy_measurement = search.get<bool>("noisy_measurement", s.noisy_measurement);
        s.measurement_repetitions = search.get<int>("repetitions", s.measurement_repetitions);
        search.finish();
    }
    {
        Section camp = top.child("campaign");
        s.beta_db = camp.get<std::vector<double>>("beta_db", s.beta_db);
        s.trials = camp.get<int>("trials", s.trials);
        s.seed = camp.get<std::uint64_t>("seed", s.seed);
        const auto avg = camp.get<std::string>("average", s.average_linear ? "linear" : "db");
        if (avg != "db" && avg != "linear")
            throw ConfigError("campaign.average", "expected db or linear");
        s.average_linear = avg == "linear";
        camp.finish();
    }
    top.finish();
    s.validate();
    return s;
}

Scenario load_scenario(const std::string &path, ConfigMode mode, std::vector<std::string> *warnings)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("--config", "cannot read scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_scenario(buf.str(), mode, warnings);
}

namespace
{

void emit_position(YAML::Emitter &out, const char *key, const Position &p)
{
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq << p.x << p.y << p.z << YAML::EndSeq;
}

void emit_pair(YAML::Emitter &out, const char *key, double a, double b)
{
    out << YAML::Key << key << YAML::Value << YAML::Flow << YAML::BeginSeq << a << b << YAML::EndSeq;
}

} // namespace

std::string save_scenario(const Scenario &s)
{
    YAML::Emitter out;
    out.SetDoublePrecision(17);
    out << YAML::BeginMap;
    out << YAML::Key << "format_version" << YAML::Value << scenario_format_version;
    out << YAML::Key << "carrier_frequency_ghz" << YAML::Value << s.carrier_frequency_hz / 1e9;

    out << YAML::Key << "bs" << YAML::Value << YAML::BeginMap;
    emit_position(out, "center_m", s.bs_center);
    out << YAML::Key << "elements" << YAML::Value << YAML::Flow << YAML::BeginSeq << s.bs_elements_x
        << s.bs_elements_z << YAML::EndSeq;
    out << YAML::Key << "spacing_wavelengths" << YAML::Value << s.bs_spacing_wavelengths;
    out << YAML::EndMap;

    out << YAML::Key << "ris" << YAML::Value << YAML::BeginMap;
    emit_position(out, "center_m", s.ris_center);
    emit_pair(out, "size_m", s.ris_size_y, s.ris_size_z);
    out << YAML::Key << "spacing_wavelengths" << YAML::Value << s.ris_spacing_wavelengths;
    out << YAML::EndMap;

    out << YAML::Key << "mu" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "antennas" << YAML::Value << s.mu_antennas;
    out << YAML::Key << "spacing_wavelengths" << YAML::Value << s.mu_spacing_wavelengths;
    out << YAML::EndMap;

    out << YAML::Key << "blockage_area" << YAML::Value << YAML::BeginMap;
    emit_position(out, "center_m", s.area.center);
    emit_pair(out, "size_m", s.area.r_x, s.area.r_y);
    out << YAML::Key << "loss_db" << YAML::Value << s.blockage_loss_db;
    out << YAML::EndMap;

    out << YAML::Key << "channel" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "paths" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "bs_ris" << YAML::Value << s.paths_bs_ris;
    out << YAML::Key << "ris_mu" << YAML::Value << s.paths_ris_mu;
    out << YAML::Key << "bs_mu" << YAML::Value << s.paths_bs_mu;
    out << YAML::EndMap;
    out << YAML::Key << "scatterer_volume_m" << YAML::Value << YAML::BeginMap;
    emit_position(out, "min", s.scatterer_volume.lo);
    emit_position(out, "max", s.scatterer_volume.hi);
    out << YAML::EndMap;
    out << YAML::Key << "phase_sign" << YAML::Value << to_string(s.phase_convention);
    out << YAML::EndMap;

    out << YAML::Key << "power" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "bs_dbm" << YAML::Value << s.p_bs_dbm;
    out << YAML::Key << "noise_psd_dbm_per_hz" << YAML::Value << s.noise.psd_dbm_per_hz;
    out << YAML::Key << "bandwidth_mhz" << YAML::Value << s.noise.bandwidth_hz / 1e6;
    out << YAML::Key << "noise_figure_db" << YAML::Value << s.noise.noise_figure_db;
    out << YAML::EndMap;

    out << YAML::Key << "codebook" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "levels" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const auto &l : s.levels)
        out << YAML::Flow << YAML::BeginSeq << l.x << l.y << YAML::EndSeq;
    out << YAML::EndSeq;
    out << YAML::Key << "alpha" << YAML::Value << s.alpha;
    out << YAML::Key << "anchor" << YAML::Value << to_string(s.anchor);
    out << YAML::EndMap;

    out << YAML::Key << "search" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "noisy_measurement" << YAML::Value << s.noisy_measurement;
    out << YAML::Key << "repetitions" << YAML::Value << s.measurement_repetitions;
    out << YAML::EndMap;

    out << YAML::Key << "campaign" << YAML::Value << YAML::BeginMap;
    out << YAML::Key << "beta_db" << YAML::Value << YAML::Flow << s.beta_db;
    out << YAML::Key << "trials" << YAML::Value << s.trials;
    out << YAML::Key << "seed" << YAML::Value << s.seed;
    out << YAML::Key << "average" << YAML::Value << (s.average_linear ? "linear" : "db");
    out << YAML::EndMap;

    out << YAML::EndMap;
    return std::string(out.c_str()) + "\n";
}

std::uint64_t scenario_hash(const Scenario &scenario)
{
    const std::string text = save_scenario(scenario);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

} // namespace nfris
