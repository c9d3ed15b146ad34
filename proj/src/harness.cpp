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

#include "nfris/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace nfris
{

const SchemeResult &TrialResult::at(Scheme s) const
{
    for (const auto &r : schemes)
        if (r.scheme == s)
            return r;
    throw std::out_of_range("TrialResult: scheme not present");
}

namespace
{

/// Runs body(i) for i in [0, n) on `workers` threads. The first exception is rethrown.
template <typename F> void parallel_for(int n, int workers, F &&body)
{
    workers = std::max(1, std::min(workers, n));
    if (workers == 1)
    {
        for (int i = 0; i < n; ++i)
            body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next++; i < n; i = next++)
            {
                try
                {
                    body(i);
                }
                catch (...)
                {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto &t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

std::uint64_t beta_key(double beta_db)
{
    std::uint64_t bits = 0;
    static_assert(sizeof(bits) == sizeof(beta_db));
    std::memcpy(&bits, &beta_db, sizeof(bits));
    return bits;
}

/// Projected channel from per-path responses for the (possibly rescaled) path gains of `link`.
CMatrix combine_matrices(const LinkPaths &link, const std::vector<CMatrix> &responses)
{
    CMatrix acc = CMatrix::Zero(responses.front().rows(), responses.front().cols());
    for (std::size_t i = 0; i < responses.size(); ++i)
        acc += (link.paths[i].amplitude * link.paths[i].fading) * responses[i];
    return acc;
}

double mean(const std::vector<double> &v)
{
    double s = 0.0;
    for (double x : v)
        s += x;
    return s / static_cast<double>(v.size());
}

} // namespace

Simulator::Simulator(Scenario scenario)
    : scenario_(std::move(scenario))
{
    scenario_.validate();
    lambda_ = scenario_.lambda();
    sigma2_ = scenario_.sigma2();
    ris_ = scenario_.ris_geometry();
    bs_ = scenario_.bs_geometry();
    g_ = unit_cell_gain(ris_, lambda_);
    ris_elements_ = element_positions(ris_);
    bs_antennas_ = element_positions(bs_);
    precoder_ = bs_precoder_focus_ris(bs_, scenario_.ris_center, lambda_, scenario_.p_bs_watts(),
                                      scenario_.sign(LinkKind::BsRis));
    combiners_ = dft_combiners(scenario_.mu_antennas);
    codebook_ = build_hierarchy(scenario_.levels, scenario_.alpha, scenario_.area, ris_, scenario_.bs_center, lambda_,
                                scenario_.anchor);
    phasors_.reserve(codebook_.levels.size());
    for (const auto &level : codebook_.levels)
    {
        std::vector<std::vector<cplx>> lp;
        lp.reserve(level.codewords.size());
        for (const auto &cw : level.codewords)
            lp.push_back(cw.phasors());
        phasors_.push_back(std::move(lp));
    }
}

TrialRealization Simulator::draw(std::uint64_t seed) const
{
    const Scenario &s = scenario_;
    TrialRealization r;
    r.seed = seed;

    Rng placement = make_stream(seed, Stream::MuPlacement);
    std::uniform_real_distribution<double> ux(-0.5 * s.area.r_x, 0.5 * s.area.r_x);
    std::uniform_real_distribution<double> uy(-0.5 * s.area.r_y, 0.5 * s.area.r_y);
    const double dx = ux(placement);
    const double dy = uy(placement);
    r.mu = s.area.center + Position{dx, dy, 0.0};
    const double d_mu = s.mu_spacing_wavelengths * lambda_;
    for (int n = 0; n < s.mu_antennas; ++n)
        r.mu_antennas.push_back(r.mu + Position{(n - 0.5 * (s.mu_antennas - 1)) * d_mu, 0.0, 0.0});

    auto link = [&](LinkKind kind, Stream scat, Stream fade, const Position &tx, const Position &rx, int paths) {
        Rng scat_rng = make_stream(seed, scat);
        Rng fade_rng = make_stream(seed, fade);
        const auto scatterers = generate_scatterers(s.scatterer_volume, paths - 1, scat_rng);
        return make_link_paths(kind, tx, rx, scatterers, fade_rng, lambda_);
    };
    r.bs_ris = link(LinkKind::BsRis, Stream::ScatterersBsRis, Stream::FadingBsRis, s.bs_center, s.ris_center,
                    s.paths_bs_ris);
    r.ris_mu =
        link(LinkKind::RisMu, Stream::ScatterersRisMu, Stream::FadingRisMu, s.ris_center, r.mu, s.paths_ris_mu);
    r.bs_mu = link(LinkKind::BsMu, Stream::ScatterersBsMu, Stream::FadingBsMu, s.bs_center, r.mu, s.paths_bs_mu);

    r.bs_ris_responses =
        projected_path_responses(r.bs_ris, bs_antennas_, ris_elements_, lambda_, s.sign(LinkKind::BsRis), precoder_.v);
    r.bs_mu_responses =
        projected_path_responses(r.bs_mu, bs_antennas_, r.mu_antennas, lambda_, s.sign(LinkKind::BsMu), precoder_.v);
    // Geometry-only response of each RIS-MU path; amplitude and fading are applied in channels().
    const double k = static_cast<int>(s.sign(LinkKind::RisMu)) * 2.0 * pi / lambda_;
    r.ris_mu_responses.reserve(r.ris_mu.paths.size());
    for (const auto &p : r.ris_mu.paths)
    {
        CMatrix m(static_cast<Eigen::Index>(r.mu_antennas.size()), static_cast<Eigen::Index>(ris_elements_.size()));
        for (std::size_t a = 0; a < r.mu_antennas.size(); ++a)
            for (std::size_t q = 0; q < ris_elements_.size(); ++q)
            {
                const double phase = k * path_length(ris_elements_[q], p, r.mu_antennas[a]);
                m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(q)) = {std::cos(phase), std::sin(phase)};
            }
        r.ris_mu_responses.push_back(std::move(m));
    }
    return r;
}

std::array<LinkPaths, 3> Simulator::scaled_links(const TrialRealization &r, double beta_db) const
{
    // A LOS-only link has no LOS/NLOS ratio to set.
    auto scale = [&](const LinkPaths &l) { return l.paths.size() > 1 ? apply_beta(l, beta_db) : l; };
    return {scale(r.bs_ris), scale(r.ris_mu), blockage_attenuation(scale(r.bs_mu), scenario_.blockage_loss_db)};
}

ProjectedChannels Simulator::channels(const TrialRealization &r, double beta_db) const
{
    const auto links = scaled_links(r, beta_db);
    return {combine_paths(links[2], r.bs_mu_responses), combine_paths(links[0], r.bs_ris_responses),
            combine_matrices(links[1], r.ris_mu_responses)};
}

ChannelSet Simulator::channel_set(const TrialRealization &r, double beta_db) const
{
    const auto links = scaled_links(r, beta_db);
    const auto &s = scenario_;
    return {assemble_channel(links[2], bs_antennas_, r.mu_antennas, lambda_, s.sign(LinkKind::BsMu)),
            assemble_channel(links[0], bs_antennas_, ris_elements_, lambda_, s.sign(LinkKind::BsRis)),
            assemble_channel(links[1], ris_elements_, r.mu_antennas, lambda_, s.sign(LinkKind::RisMu))};
}

TrialResult Simulator::evaluate(const TrialRealization &r, double beta_db, int trial_index) const
{
    const ProjectedChannels ch = channels(r, beta_db);
    TrialResult out;
    out.trial = trial_index;
    out.seed = r.seed;
    out.beta_db = beta_db;
    out.mu = r.mu;

    auto true_snr = [&](std::size_t level, CellIndex cell) {
        const auto &lv = codebook_.levels[level];
        return received_snr(ch, phasors_[level][static_cast<std::size_t>(lv.flat(cell))], g_, combiners_, sigma2_);
    };

    SearchOutcome search;
    if (scenario_.noisy_measurement)
    {
        Rng rng = make_stream(r.seed ^ mix64(beta_key(beta_db)), Stream::Measurement);
        search = hierarchical_search(codebook_, [&](std::size_t level, CellIndex cell, const PhaseVector &) {
            const auto &lv = codebook_.levels[level];
            return measured_snr(ch, phasors_[level][static_cast<std::size_t>(lv.flat(cell))], g_, combiners_, sigma2_,
                                scenario_.measurement_repetitions, rng);
        });
    }
    else
    {
        search = hierarchical_search(codebook_,
                                     [&](std::size_t level, CellIndex cell, const PhaseVector &) { return true_snr(level, cell); });
    }
    out.trace = std::move(search.trace);

    const std::size_t last = codebook_.levels.size() - 1;
    double b1 = 0.0;
    for (const auto &c : phasors_[last])
        b1 = std::max(b1, received_snr(ch, c, g_, combiners_, sigma2_));

    out.schemes[3] = make_result(Scheme::Hierarchical, true_snr(last, search.winner), {out.trace.pilots, false, 0});
    out.schemes[2] =
        make_result(Scheme::FullCodebook, b1, {static_cast<int>(codebook_.levels[last].codewords.size()), false, 0});
    out.schemes[1] =
        benchmark2_full_focusing(ch, r.mu, ris_, scenario_.bs_center, combiners_, sigma2_, lambda_);
    if (scenario_.mu_antennas == 1)
    {
        const CVector h2 = ch.H2.row(0).transpose();
        out.schemes[0] = benchmark3_full_csi(ch.h1, h2, ch.h_direct(0), g_, sigma2_).result;
    }
    else
    {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        out.schemes[0] = {Scheme::FullCsi, nan, nan, {0, false, 0}};
    }
    return out;
}

TrialResult Simulator::run_trial(double beta_db, std::uint64_t seed, int trial_index) const
{
    return evaluate(draw(seed), beta_db, trial_index);
}

std::vector<std::vector<TrialResult>> Simulator::sweep(const std::vector<double> &betas, int trials,
                                                       int workers) const
{
    if (trials < 1)
        throw std::invalid_argument("sweep: trials must be >= 1");
    std::vector<std::vector<TrialResult>> out(betas.size(), std::vector<TrialResult>(static_cast<std::size_t>(trials)));
    parallel_for(trials, workers, [&](int t) {
        const TrialRealization r = draw(trial_seed(scenario_.seed, static_cast<std::uint64_t>(t)));
        for (std::size_t b = 0; b < betas.size(); ++b)
            out[b][static_cast<std::size_t>(t)] = evaluate(r, betas[b], t);
    });
    return out;
}

double Simulator::grcs_snr(const Position &p_r, cplx g_ris) const
{
    const double pl1 = free_space_amplitude(distance(scenario_.bs_center, scenario_.ris_center), lambda_);
    const double pl2 = free_space_amplitude(distance(p_r, scenario_.ris_center), lambda_);
    return scenario_.p_bs_watts() * std::norm(pl1 * pl2 * g_ris) / sigma2_;
}

TrialResult run_trial(const Scenario &scenario, double beta_db, std::uint64_t seed)
{
    return Simulator(scenario).run_trial(beta_db, seed);
}

std::vector<AggregateRow> aggregate(const std::vector<std::vector<TrialResult>> &results, bool average_linear)
{
    std::vector<AggregateRow> rows;
    for (const auto &per_beta : results)
    {
        if (per_beta.empty())
            continue;
        for (std::size_t si = 0; si < all_schemes.size(); ++si)
        {
            std::vector<double> db;
            std::vector<double> lin;
            for (const auto &t : per_beta)
            {
                db.push_back(t.schemes[si].snr_db);
                lin.push_back(t.schemes[si].snr_linear);
            }
            const double m_db = mean(db);
            double var = 0.0;
            for (double x : db)
                var += (x - m_db) * (x - m_db);
            AggregateRow row;
            row.scheme = all_schemes[si];
            row.beta_db = per_beta.front().beta_db;
            row.mean_snr_db = average_linear ? linear_to_db(mean(lin)) : m_db;
            row.std_snr_db = db.size() > 1 ? std::sqrt(var / static_cast<double>(db.size() - 1)) : 0.0;
            row.trials = static_cast<int>(db.size());
            rows.push_back(row);
        }
    }
    return rows;
}

std::vector<AggregateRow> sweep_beta(const Scenario &scenario, int workers)
{
    const Simulator sim(scenario);
    return aggregate(sim.sweep(scenario.beta_db, scenario.trials, workers), scenario.average_linear);
}

std::vector<CutPoint> focusing_cut(const Simulator &sim, Axis axis, double range, int steps)
{
    if (steps < 2 || !(range > 0.0))
        throw std::invalid_argument("focusing_cut: need range > 0 and at least 2 steps");
    const Scenario &s = sim.scenario();
    const GrcsField field(s.bs_center, sim.ris(), sim.lambda());
    const auto c = focusing_phases(s.bs_center, s.area.center, sim.ris(), sim.lambda()).phasors();
    std::vector<CutPoint> out;
    out.reserve(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
    {
        const double delta = -range + 2.0 * range * i / (steps - 1);
        const Position p_r = s.area.center + (axis == Axis::X ? Position{delta, 0.0, 0.0} : Position{0.0, delta, 0.0});
        const auto st = field.steering(p_r);
        out.push_back({delta, linear_to_db(sim.grcs_snr(p_r, field.evaluate(st, c)))});
    }
    return out;
}

double main_lobe_width_3db(const std::vector<CutPoint> &cut)
{
    if (cut.size() < 2)
        throw std::invalid_argument("main_lobe_width_3db: need at least two samples");
    const auto peak_it =
        std::max_element(cut.begin(), cut.end(), [](const CutPoint &a, const CutPoint &b) { return a.snr_db < b.snr_db; });
    const std::size_t peak = static_cast<std::size_t>(peak_it - cut.begin());
    const double level = peak_it->snr_db - 3.0;
    auto crossing = [&](std::size_t inside, std::size_t outside) {
        const double a = cut[inside].snr_db, b = cut[outside].snr_db;
        const double t = (a - level) / (a - b);
        return cut[inside].displacement + t * (cut[outside].displacement - cut[inside].displacement);
    };
    std::size_t lo = peak;
    while (lo > 0 && cut[lo - 1].snr_db >= level)
        --lo;
    std::size_t hi = peak;
    while (hi + 1 < cut.size() && cut[hi + 1].snr_db >= level)
        ++hi;
    const double left = lo > 0 ? crossing(lo, lo - 1) : cut.front().displacement;
    const double right = hi + 1 < cut.size() ? crossing(hi, hi + 1) : cut.back().displacement;
    return right - left;
}

double Raster::peak_db() const
{
    if (composite_db.empty())
        throw std::logic_error("Raster::peak_db: empty raster");
    return *std::max_element(composite_db.begin(), composite_db.end());
}

std::vector<double> raster_axis(double extent, int n)
{
    if (n < 1 || !(extent > 0.0))
        throw std::invalid_argument("raster_axis: need n >= 1 and a positive extent");
    std::vector<double> out(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = -0.5 * extent + (i + 0.5) * extent / n;
    return out;
}

Raster heatmap(const Simulator &sim, std::size_t level, std::vector<CellIndex> cells, int nx, int ny, int workers)
{
    const auto &cb = sim.codebook();
    if (level >= cb.levels.size())
        throw std::out_of_range("heatmap: level " + std::to_string(level + 1) + " does not exist");
    const auto &lv = cb.levels[level];
    if (cells.empty())
        for (int f = 0; f < lv.size.count(); ++f)
            cells.push_back(lv.cell(f));
    const Scenario &s = sim.scenario();

    Raster r;
    r.xs = raster_axis(s.area.r_x, nx);
    r.ys = raster_axis(s.area.r_y, ny);
    r.cells = cells;
    const std::size_t points = r.xs.size() * r.ys.size();
    r.snr_db.assign(cells.size(), std::vector<double>(points));
    r.composite_db.assign(points, -std::numeric_limits<double>::infinity());

    std::vector<std::vector<cplx>> words;
    words.reserve(cells.size());
    for (const auto &c : cells)
        words.push_back(lv.at(c).phasors());

    const GrcsField field(s.bs_center, sim.ris(), sim.lambda());
    parallel_for(nx, workers, [&](int ix) {
        for (std::size_t iy = 0; iy < r.ys.size(); ++iy)
        {
            const Position p_r = s.area.center + Position{r.xs[static_cast<std::size_t>(ix)], r.ys[iy], 0.0};
            const auto st = field.steering(p_r);
            const std::size_t idx = static_cast<std::size_t>(ix) * r.ys.size() + iy;
            double best = -std::numeric_limits<double>::infinity();
            for (std::size_t c = 0; c < words.size(); ++c)
            {
                const double v = linear_to_db(sim.grcs_snr(p_r, field.evaluate(st, words[c])));
                r.snr_db[c][idx] = v;
                best = std::max(best, v);
            }
            r.composite_db[idx] = best;
        }
    });
    return r;
}

std::vector<double> raster_for(const Simulator &sim, const PhaseVector &omega, const std::vector<double> &xs,
                               const std::vector<double> &ys)
{
    const Scenario &s = sim.scenario();
    const GrcsField field(s.bs_center, sim.ris(), sim.lambda());
    const auto c = omega.phasors();
    std::vector<double> out;
    out.reserve(xs.size() * ys.size());
    for (double x : xs)
        for (double y : ys)
        {
            const Position p_r = s.area.center + Position{x, y, 0.0};
            out.push_back(linear_to_db(sim.grcs_snr(p_r, field.evaluate(field.steering(p_r), c))));
        }
    return out;
}

} // namespace nfris
