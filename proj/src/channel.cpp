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

#include "nfris/channel.hpp"

#include <json.hpp>

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace nfris
{

const char *to_string(LinkKind link)
{
    switch (link)
    {
    case LinkKind::BsRis:
        return "BS-RIS";
    case LinkKind::RisMu:
        return "RIS-MU";
    case LinkKind::BsMu:
        return "BS-MU";
    }
    return "?";
}

void LinkPaths::validate() const
{
    if (paths.empty() || paths.front().kind != PathKind::LOS)
        throw std::invalid_argument(std::string("LinkPaths ") + to_string(link) + ": path 0 must be the LOS path");
    for (std::size_t i = 0; i < paths.size(); ++i)
    {
        const auto &p = paths[i];
        if (i > 0 && p.kind != PathKind::NLOS)
            throw std::invalid_argument(std::string("LinkPaths ") + to_string(link) + ": only path 0 may be LOS");
        if (p.kind == PathKind::NLOS && !p.scatterer)
            throw std::invalid_argument(std::string("LinkPaths ") + to_string(link) + ": NLOS path without scatterer");
        if (p.kind == PathKind::LOS && p.scatterer)
            throw std::invalid_argument(std::string("LinkPaths ") + to_string(link) + ": LOS path with scatterer");
        if (!(p.amplitude >= 0.0) || !std::isfinite(p.amplitude))
            throw std::invalid_argument(std::string("LinkPaths ") + to_string(link) + ": amplitude must be >= 0");
    }
}

double LinkPaths::los_power() const
{
    return paths.empty() ? 0.0 : paths.front().amplitude * paths.front().amplitude;
}

double LinkPaths::nlos_power() const
{
    double acc = 0.0;
    for (std::size_t i = 1; i < paths.size(); ++i)
        acc += paths[i].amplitude * paths[i].amplitude;
    return acc;
}

double free_space_amplitude(double d, double lambda)
{
    if (!(d > 0.0))
        throw std::invalid_argument("free_space_amplitude: distance must be positive");
    if (!(lambda > 0.0))
        throw std::invalid_argument("free_space_amplitude: wavelength must be positive");
    return lambda / (4.0 * pi * d);
}

std::vector<Position> generate_scatterers(const Box &volume, int count, Rng &rng)
{
    if (count < 0)
        throw std::invalid_argument("generate_scatterers: count must be >= 0");
    std::uniform_real_distribution<double> ux(volume.lo.x, volume.hi.x);
    std::uniform_real_distribution<double> uy(volume.lo.y, volume.hi.y);
    std::uniform_real_distribution<double> uz(volume.lo.z, volume.hi.z);
    std::vector<Position> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i)
    {
        // Sequenced explicitly: argument evaluation order is unspecified.
        const double x = ux(rng);
        const double y = uy(rng);
        const double z = uz(rng);
        out.push_back({x, y, z});
    }
    return out;
}

double path_length(const Position &a, const Path &path, const Position &b)
{
    if (path.kind == PathKind::LOS)
        return distance(a, b);
    if (!path.scatterer)
        throw std::invalid_argument("path_length: NLOS path without scatterer");
    return distance(a, *path.scatterer) + distance(*path.scatterer, b);
}

namespace
{

cplx phasor(double phase) { return {std::cos(phase), std::sin(phase)}; }

void check_weights(std::span<const Position> tx, const CVector &w)
{
    if (static_cast<std::size_t>(w.size()) != tx.size())
        throw std::invalid_argument("channel projection: weight vector length " + std::to_string(w.size()) +
                                    " does not match " + std::to_string(tx.size()) + " transmit elements");
}

} // namespace

CMatrix assemble_channel(const LinkPaths &link, std::span<const Position> tx, std::span<const Position> rx,
                         double lambda, PhaseSign sign)
{
    link.validate();
    if (tx.empty() || rx.empty())
        throw std::invalid_argument("assemble_channel: empty position list");
    const double k = static_cast<int>(sign) * 2.0 * pi / lambda;
    CMatrix h = CMatrix::Zero(static_cast<Eigen::Index>(rx.size()), static_cast<Eigen::Index>(tx.size()));
    for (const auto &p : link.paths)
    {
        const cplx gain = p.amplitude * p.fading;
        for (std::size_t r = 0; r < rx.size(); ++r)
            for (std::size_t t = 0; t < tx.size(); ++t)
                h(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(t)) +=
                    gain * phasor(k * path_length(tx[t], p, rx[r]));
    }
    return h;
}

std::vector<CVector> projected_path_responses(const LinkPaths &link, std::span<const Position> tx,
                                              std::span<const Position> rx, double lambda, PhaseSign sign,
                                              const CVector &tx_weights)
{
    link.validate();
    check_weights(tx, tx_weights);
    const double k = static_cast<int>(sign) * 2.0 * pi / lambda;
    const auto n_rx = static_cast<Eigen::Index>(rx.size());
    std::vector<CVector> out;
    out.reserve(link.paths.size());
    for (const auto &p : link.paths)
    {
        CVector resp(n_rx);
        if (p.kind == PathKind::LOS)
        {
            for (Eigen::Index r = 0; r < n_rx; ++r)
            {
                cplx acc{0.0, 0.0};
                for (std::size_t t = 0; t < tx.size(); ++t)
                    acc += phasor(k * distance(tx[t], rx[static_cast<std::size_t>(r)])) *
                           tx_weights(static_cast<Eigen::Index>(t));
                resp(r) = acc;
            }
        }
        else
        {
            // The bounce length splits into a tx-only and an rx-only term.
            const Position s = *p.scatterer;
            cplx tx_sum{0.0, 0.0};
            for (std::size_t t = 0; t < tx.size(); ++t)
                tx_sum += phasor(k * distance(tx[t], s)) * tx_weights(static_cast<Eigen::Index>(t));
            for (Eigen::Index r = 0; r < n_rx; ++r)
                resp(r) = phasor(k * distance(s, rx[static_cast<std::size_t>(r)])) * tx_sum;
        }
        out.push_back(std::move(resp));
    }
    return out;
}

CVector combine_paths(const LinkPaths &link, const std::vector<CVector> &responses)
{
    if (responses.size() != link.paths.size() || responses.empty())
        throw std::invalid_argument("combine_paths: response count does not match path count");
    CVector acc = CVector::Zero(responses.front().size());
    for (std::size_t i = 0; i < responses.size(); ++i)
        acc += (link.paths[i].amplitude * link.paths[i].fading) * responses[i];
    return acc;
}

CVector assemble_projected(const LinkPaths &link, std::span<const Position> tx, std::span<const Position> rx,
                           double lambda, PhaseSign sign, const CVector &tx_weights)
{
    return combine_paths(link, projected_path_responses(link, tx, rx, lambda, sign, tx_weights));
}

LinkPaths apply_beta(LinkPaths link, double beta_db)
{
    link.validate();
    if (std::isnan(beta_db))
        throw std::invalid_argument("apply_beta: beta is NaN");
    if (std::isinf(beta_db))
    {
        if (beta_db < 0.0)
            throw std::invalid_argument("apply_beta: beta = -inf would need infinite NLOS power");
        for (std::size_t i = 1; i < link.paths.size(); ++i)
            link.paths[i].amplitude = 0.0;
        return link;
    }
    const double nlos = link.nlos_power();
    if (link.paths.size() < 2 || !(nlos > 0.0))
        throw std::invalid_argument(std::string("apply_beta: link ") + to_string(link.link) +
                                    " has no NLOS power to scale");
    const double target = link.los_power() / db_to_linear(beta_db);
    const double scale = std::sqrt(target / nlos);
    for (std::size_t i = 1; i < link.paths.size(); ++i)
        link.paths[i].amplitude *= scale;
    return link;
}

LinkPaths blockage_attenuation(LinkPaths link, double loss_db)
{
    if (!(loss_db >= 0.0) || !std::isfinite(loss_db))
        throw std::invalid_argument("blockage_attenuation: loss must be finite and >= 0 dB");
    const double factor = std::pow(10.0, -loss_db / 20.0);
    for (auto &p : link.paths)
        p.amplitude *= factor;
    return link;
}

double noise_power(const NoiseModel &model)
{
    if (!(model.bandwidth_hz > 0.0))
        throw std::invalid_argument("noise_power: bandwidth must be positive");
    return std::pow(10.0, (model.psd_dbm_per_hz + 10.0 * std::log10(model.bandwidth_hz) + model.noise_figure_db - 30.0) /
                              10.0);
}

LinkPaths make_link_paths(LinkKind kind, const Position &tx_ref, const Position &rx_ref,
                          std::span<const Position> scatterers, Rng &fading_rng, double lambda)
{
    LinkPaths link{kind, {}};
    link.paths.reserve(scatterers.size() + 1);
    link.paths.push_back({PathKind::LOS, std::nullopt, free_space_amplitude(distance(tx_ref, rx_ref), lambda), {1.0, 0.0}});
    for (const auto &s : scatterers)
    {
        Path p{PathKind::NLOS, s, 0.0, draw_cn01(fading_rng)};
        p.amplitude = free_space_amplitude(path_length(tx_ref, p, rx_ref), lambda);
        link.paths.push_back(p);
    }
    return link;
}

namespace
{

nlohmann::json matrix_to_json(const CMatrix &m)
{
    nlohmann::json j;
    j["rows"] = m.rows();
    j["cols"] = m.cols();
    std::vector<double> data;
    data.reserve(static_cast<std::size_t>(2 * m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c)
        {
            data.push_back(m(r, c).real());
            data.push_back(m(r, c).imag());
        }
    j["data"] = std::move(data);
    return j;
}

CMatrix matrix_from_json(const nlohmann::json &j, const char *name)
{
    const auto rows = j.at("rows").get<Eigen::Index>();
    const auto cols = j.at("cols").get<Eigen::Index>();
    const auto &data = j.at("data");
    if (static_cast<Eigen::Index>(data.size()) != 2 * rows * cols)
        throw std::runtime_error(std::string("channel file: matrix ") + name + " has inconsistent data length");
    CMatrix m(rows, cols);
    std::size_t i = 0;
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c, i += 2)
            m(r, c) = {data[i].get<double>(), data[i + 1].get<double>()};
    return m;
}

} // namespace

void write_channel_json(const ChannelSet &channels, std::ostream &os)
{
    nlohmann::json j;
    j["format_version"] = 1;
    j["layout"] = "row-major [re, im] pairs";
    j["H"] = matrix_to_json(channels.H);
    j["H1"] = matrix_to_json(channels.H1);
    j["H2"] = matrix_to_json(channels.H2);
    os << j.dump() << '\n';
}

ChannelSet read_channel_json(std::istream &is)
{
    const auto j = nlohmann::json::parse(is);
    if (j.at("format_version").get<int>() != 1)
        throw std::runtime_error("channel file: unsupported format_version");
    return {matrix_from_json(j.at("H"), "H"), matrix_from_json(j.at("H1"), "H1"), matrix_from_json(j.at("H2"), "H2")};
}

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

} // namespace nfris
