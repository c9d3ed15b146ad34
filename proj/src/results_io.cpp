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

#include "nfris/results_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <map>
#include <stdexcept>

namespace nfris
{

std::string format_number(double value)
{
    if (std::isnan(value))
        return "nan";
    if (std::isinf(value))
        return value > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

namespace
{

void write_version(std::ostream &out) { out << "# format_version: " << results_format_version << '\n'; }

} // namespace

void write_trials_csv(std::ostream &out, const std::vector<std::vector<TrialResult>> &results)
{
    write_version(out);
    out << "beta_db,trial,seed,mu_x_m,mu_y_m,mu_z_m,scheme,snr_db,pilots,needs_position,channel_coefficients,"
           "winner_x,winner_y\n";
    for (const auto &per_beta : results)
    {
        for (const auto &t : per_beta)
        {
            for (const auto &r : t.schemes)
            {
                int wx = -1;
                int wy = -1;
                if (r.scheme == Scheme::Hierarchical && !t.trace.levels.empty())
                {
                    wx = t.trace.levels.back().winner.x;
                    wy = t.trace.levels.back().winner.y;
                }
                out << format_number(t.beta_db) << ',' << t.trial << ',' << t.seed << ',' << format_number(t.mu.x)
                    << ',' << format_number(t.mu.y) << ',' << format_number(t.mu.z) << ',' << to_string(r.scheme)
                    << ',' << format_number(r.snr_db) << ',' << r.cost.pilots << ','
                    << (r.cost.needs_position ? 1 : 0) << ',' << r.cost.channel_coefficients << ',' << wx << ','
                    << wy << '\n';
            }
        }
    }
}

void write_aggregates_csv(std::ostream &out, const std::vector<AggregateRow> &rows)
{
    // Keep the first-seen beta order.
    std::vector<double> betas;
    std::map<std::pair<double, Scheme>, const AggregateRow *> index;
    for (const auto &r : rows)
    {
        if (std::find(betas.begin(), betas.end(), r.beta_db) == betas.end())
            betas.push_back(r.beta_db);
        index[{r.beta_db, r.scheme}] = &r;
    }

    write_version(out);
    out << "beta_db";
    for (Scheme s : all_schemes)
        out << ',' << to_string(s) << "_mean_db";
    for (Scheme s : all_schemes)
        out << ',' << to_string(s) << "_std_db";
    out << ",trials\n";
    for (double b : betas)
    {
        out << format_number(b);
        int trials = 0;
        for (Scheme s : all_schemes)
        {
            const auto it = index.find({b, s});
            out << ',' << (it == index.end() ? "nan" : format_number(it->second->mean_snr_db));
            if (it != index.end())
                trials = it->second->trials;
        }
        for (Scheme s : all_schemes)
        {
            const auto it = index.find({b, s});
            out << ',' << (it == index.end() ? "nan" : format_number(it->second->std_snr_db));
        }
        out << ',' << trials << '\n';
    }
}

void write_raster_csv(std::ostream &out, const std::vector<double> &xs, const std::vector<double> &ys,
                      const std::vector<double> &values, const Position &origin)
{
    if (values.size() != xs.size() * ys.size())
        throw std::invalid_argument("write_raster_csv: raster size does not match the axes");
    write_version(out);
    out << "x_m,y_m,snr_db\n";
    for (std::size_t ix = 0; ix < xs.size(); ++ix)
        for (std::size_t iy = 0; iy < ys.size(); ++iy)
            out << format_number(origin.x + xs[ix]) << ',' << format_number(origin.y + ys[iy]) << ','
                << format_number(values[ix * ys.size() + iy]) << '\n';
}

void write_cut_csv(std::ostream &out, Axis axis, const std::vector<CutPoint> &cut)
{
    write_version(out);
    out << "axis,displacement_m,snr_db\n";
    for (const auto &p : cut)
        out << (axis == Axis::X ? 'x' : 'y') << ',' << format_number(p.displacement) << ','
            << format_number(p.snr_db) << '\n';
}

std::vector<FarfieldRow> farfield_table(const std::vector<double> &apertures_m,
                                        const std::vector<double> &frequencies_hz, double spacing_wavelengths)
{
    std::vector<FarfieldRow> rows;
    for (double f : frequencies_hz)
    {
        const double lambda = wavelength(f);
        for (double L : apertures_m)
        {
            const int side = elements_for_aperture(L, spacing_wavelengths * lambda);
            rows.push_back({L, f, side, static_cast<long>(side) * side,
                            far_field_distance(std::sqrt(2.0) * L, lambda)});
        }
    }
    return rows;
}

void write_farfield_csv(std::ostream &out, const std::vector<FarfieldRow> &rows)
{
    write_version(out);
    out << "aperture_m,frequency_ghz,elements_per_side,elements,far_field_m\n";
    for (const auto &r : rows)
        out << format_number(r.aperture_m) << ',' << format_number(r.frequency_hz / 1e9) << ','
            << r.elements_per_side << ',' << r.elements << ',' << format_number(r.far_field_m) << '\n';
}

std::string manifest_to_json(const RunManifest &m)
{
    nlohmann::ordered_json j;
    j["format_version"] = m.format_version;
    j["tool_version"] = m.tool_version;
    j["subcommand"] = m.subcommand;
    j["command_line"] = m.command_line;
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(m.scenario_hash));
    j["scenario_hash"] = hash;
    j["seed"] = m.seed;
    j["started_utc"] = m.started_utc;
    j["finished_utc"] = m.finished_utc;
    j["outputs"] = m.outputs;
    j["scenario_yaml"] = m.scenario_yaml;
    return j.dump(2) + "\n";
}

RunManifest manifest_from_json(const std::string &text)
{
    RunManifest m;
    try
    {
        const auto j = nlohmann::json::parse(text);
        m.format_version = j.at("format_version").get<int>();
        if (m.format_version != results_format_version)
            throw std::runtime_error("unsupported manifest format_version " + std::to_string(m.format_version));
        m.tool_version = j.at("tool_version").get<std::string>();
        m.subcommand = j.at("subcommand").get<std::string>();
        m.command_line = j.at("command_line").get<std::vector<std::string>>();
        m.scenario_hash = std::stoull(j.at("scenario_hash").get<std::string>(), nullptr, 16);
        m.seed = j.at("seed").get<std::uint64_t>();
        m.started_utc = j.value("started_utc", "");
        m.finished_utc = j.value("finished_utc", "");
        m.outputs = j.value("outputs", std::vector<std::string>{});
        m.scenario_yaml = j.at("scenario_yaml").get<std::string>();
    }
    catch (const nlohmann::json::exception &e)
    {
        throw std::runtime_error(std::string("malformed manifest: ") + e.what());
    }
    return m;
}

std::string utc_timestamp()
{
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

} // namespace nfris
