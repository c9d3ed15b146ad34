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

#include "cli.hpp"

#include "nfris/harness.hpp"
#include "nfris/results_io.hpp"
#include "nfris/scenario_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <sstream>
#include <thread>

namespace nfris
{

namespace
{

namespace fs = std::filesystem;

struct Common
{
    std::string config;
    std::uint64_t seed = 0;
    std::string out_dir = ".";
    int trials = 0;
    std::vector<double> beta;
    int workers = 0;
    bool lax = false;

    CLI::Option *seed_opt = nullptr;
    CLI::Option *trials_opt = nullptr;
    CLI::Option *beta_opt = nullptr;
};

void add_common(CLI::App *sub, Common &c)
{
    sub->add_option("--config", c.config, "Scenario file (YAML)");
    c.seed_opt = sub->add_option("--seed", c.seed, "Master seed (overrides campaign.seed)");
    sub->add_option("--out-dir", c.out_dir, "Output directory")->capture_default_str();
    c.trials_opt = sub->add_option("--trials", c.trials, "Trials per beta (overrides campaign.trials)")
                       ->check(CLI::PositiveNumber);
    c.beta_opt = sub->add_option("--beta", c.beta, "Rician factor(s) in dB");
    sub->add_option("--workers", c.workers, "Worker threads (0: hardware concurrency)")->check(CLI::NonNegativeNumber);
    sub->add_flag("--lax", c.lax, "Warn on unknown scenario keys instead of failing");
}

/// State shared by one invocation; `preset` is set when replaying a manifest.
struct Invocation
{
    std::vector<std::string> args;
    std::ostream &out;
    std::ostream &err;
    const Scenario *preset = nullptr;
    std::optional<std::string> out_dir_override;
};

class Session
{
  public:
    Session(Invocation &inv, Common &c, std::string subcommand)
        : inv_(inv), c_(c), started_(utc_timestamp())
    {
        manifest_.subcommand = std::move(subcommand);
        manifest_.command_line = inv.args;
        out_dir_ = inv.out_dir_override.value_or(c.out_dir);
    }

    Scenario scenario(bool config_required = true)
    {
        Scenario s;
        if (inv_.preset)
            s = *inv_.preset;
        else if (!c_.config.empty())
        {
            std::vector<std::string> warnings;
            s = load_scenario(c_.config, c_.lax ? ConfigMode::Lax : ConfigMode::Strict, &warnings);
            for (const auto &w : warnings)
                inv_.err << "warning: " << w << '\n';
        }
        else if (config_required)
            throw ConfigError("--config", "a scenario file is required");

        if (c_.seed_opt->count())
            s.seed = c_.seed;
        if (c_.trials_opt->count())
            s.trials = c_.trials;
        if (c_.beta_opt->count())
            s.beta_db = c_.beta;
        s.validate();
        return s;
    }

    int workers() const
    {
        if (c_.workers > 0)
            return c_.workers;
        return std::max(1u, std::thread::hardware_concurrency());
    }

    void write(const std::string &name, const std::function<void(std::ostream &)> &body)
    {
        fs::create_directories(out_dir_);
        const fs::path path = fs::path(out_dir_) / name;
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write '" + path.string() + "'");
        body(f);
        if (!f)
            throw std::runtime_error("write failed for '" + path.string() + "'");
        manifest_.outputs.push_back(name);
        inv_.out << "wrote " << path.string() << '\n';
    }

    void finish(const Scenario &s)
    {
        manifest_.scenario_hash = scenario_hash(s);
        manifest_.seed = s.seed;
        manifest_.scenario_yaml = save_scenario(s);
        manifest_.started_utc = started_;
        manifest_.finished_utc = utc_timestamp();
        const std::string text = manifest_to_json(manifest_);
        const fs::path path = fs::path(out_dir_) / (manifest_.subcommand + ".manifest.json");
        fs::create_directories(out_dir_);
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write '" + path.string() + "'");
        f << text;
        inv_.out << "wrote " << path.string() << '\n';
    }

    std::ostream &out() { return inv_.out; }

  private:
    Invocation &inv_;
    Common &c_;
    std::string started_;
    std::string out_dir_;
    RunManifest manifest_;
};

void print_aggregates(std::ostream &out, const std::vector<AggregateRow> &rows)
{
    out << std::left << std::setw(10) << "beta_db";
    for (Scheme s : all_schemes)
        out << std::setw(20) << to_string(s);
    out << '\n';
    for (std::size_t i = 0; i < rows.size(); i += all_schemes.size())
    {
        out << std::setw(10) << format_number(rows[i].beta_db);
        for (std::size_t k = 0; k < all_schemes.size() && i + k < rows.size(); ++k)
            out << std::setw(20) << format_number(rows[i + k].mean_snr_db);
        out << '\n';
    }
    out << std::right;
}

int run_campaign(Invocation &inv, Common &c, const std::string &name, const std::string &prefix, bool single_beta)
{
    Session session(inv, c, name);
    Scenario s = session.scenario();
    if (single_beta)
    {
        if (s.beta_db.size() != 1)
        {
            if (c.beta_opt->count())
                throw ConfigError("--beta", "simulate takes a single value");
            s.beta_db = {10.0};
        }
    }
    const Simulator sim(s);
    const auto results = sim.sweep(s.beta_db, s.trials, session.workers());
    const auto rows = aggregate(results, s.average_linear);
    session.write(prefix + "_trials.csv", [&](std::ostream &o) { write_trials_csv(o, results); });
    session.write(prefix + "_aggregates.csv", [&](std::ostream &o) { write_aggregates_csv(o, rows); });
    print_aggregates(session.out(), rows);
    session.finish(s);
    return 0;
}

std::vector<CellIndex> parse_cells(const std::vector<std::string> &specs)
{
    std::vector<CellIndex> cells;
    for (const auto &text : specs)
    {
        CellIndex c{};
        char comma = 0;
        std::istringstream in(text);
        if (!(in >> c.x >> comma >> c.y) || comma != ',' || !in.eof())
            throw ConfigError("--cell", "expected 'x,y', got '" + text + "'");
        cells.push_back(c);
    }
    return cells;
}

struct HeatmapOptions
{
    int level = 0; // 1-based; 0 means the last level
    int grid = 64;
    bool per_cell = false;
    std::vector<std::string> cells;
};

int run_heatmap(Invocation &inv, Common &c, const HeatmapOptions &h)
{
    Session session(inv, c, "heatmap");
    const Scenario s = session.scenario();
    const Simulator sim(s);
    const int levels = static_cast<int>(sim.codebook().levels.size());
    const int level = h.level == 0 ? levels : h.level;
    if (level < 1 || level > levels)
        throw ConfigError("--level", "must lie in [1, " + std::to_string(levels) + "]");
    const auto raster =
        heatmap(sim, static_cast<std::size_t>(level - 1), parse_cells(h.cells), h.grid, h.grid, session.workers());
    const std::string base = "heatmap_level" + std::to_string(level);
    session.write(base + ".csv", [&](std::ostream &o) {
        write_raster_csv(o, raster.xs, raster.ys, raster.composite_db, s.area.center);
    });
    if (h.per_cell)
    {
        for (std::size_t k = 0; k < raster.cells.size(); ++k)
        {
            const auto &cell = raster.cells[k];
            session.write(base + "_cell" + std::to_string(cell.x) + "_" + std::to_string(cell.y) + ".csv",
                          [&](std::ostream &o) {
                              write_raster_csv(o, raster.xs, raster.ys, raster.snr_db[k], s.area.center);
                          });
        }
    }
    session.out() << "level " << level << ": " << raster.cells.size() << " codewords, composite peak "
                  << format_number(raster.peak_db()) << " dB\n";
    session.finish(s);
    return 0;
}

struct CutOptions
{
    double range = 8.0;
    int steps = 401;
};

int run_focus_cut(Invocation &inv, Common &c, const CutOptions &opt)
{
    Session session(inv, c, "focus-cut");
    const Scenario s = session.scenario();
    const Simulator sim(s);
    for (Axis axis : {Axis::X, Axis::Y})
    {
        const auto cut = focusing_cut(sim, axis, opt.range, opt.steps);
        const std::string name = axis == Axis::X ? "x" : "y";
        session.write("focus_cut_" + name + ".csv", [&](std::ostream &o) { write_cut_csv(o, axis, cut); });
        const auto peak = std::max_element(cut.begin(), cut.end(),
                                           [](const CutPoint &a, const CutPoint &b) { return a.snr_db < b.snr_db; });
        session.out() << name << ": peak " << format_number(peak->snr_db) << " dB at "
                      << format_number(peak->displacement) << " m, -3 dB width "
                      << format_number(main_lobe_width_3db(cut)) << " m\n";
    }
    session.finish(s);
    return 0;
}

int run_codebook_dump(Invocation &inv, Common &c)
{
    Session session(inv, c, "codebook-dump");
    const Scenario s = session.scenario();
    const Simulator sim(s);
    session.write("codebook.json", [&](std::ostream &o) { write_codebook_json(sim.codebook(), o); });
    for (std::size_t l = 0; l < sim.codebook().levels.size(); ++l)
    {
        const auto &lv = sim.codebook().levels[l];
        session.out() << "level " << l + 1 << ": " << lv.size.x << " x " << lv.size.y << " codewords\n";
    }
    session.finish(s);
    return 0;
}

struct FarfieldOptions
{
    std::vector<double> apertures;
    std::vector<double> frequencies_ghz;
};

int run_farfield(Invocation &inv, Common &c, const FarfieldOptions &opt)
{
    Session session(inv, c, "farfield");
    const Scenario s = session.scenario(false);
    std::vector<double> apertures = opt.apertures;
    if (apertures.empty())
        for (int i = 1; i <= 20; ++i)
            apertures.push_back(0.05 * i);
    std::vector<double> freqs;
    for (double f : opt.frequencies_ghz)
        freqs.push_back(f * 1e9);
    if (freqs.empty())
        freqs.push_back(s.carrier_frequency_hz);
    for (double L : apertures)
        if (!(L > 0.0))
            throw ConfigError("--aperture", "apertures must be positive");
    for (double f : freqs)
        if (!(f > 0.0))
            throw ConfigError("--frequency-ghz", "frequencies must be positive");

    const auto rows = farfield_table(apertures, freqs, s.ris_spacing_wavelengths);
    session.write("farfield.csv", [&](std::ostream &o) { write_farfield_csv(o, rows); });
    for (const auto &r : rows)
        session.out() << "L = " << format_number(r.aperture_m) << " m, f = " << format_number(r.frequency_hz / 1e9)
                      << " GHz, Q = " << r.elements << ": d_F = " << format_number(r.far_field_m) << " m\n";
    session.finish(s);
    return 0;
}

int dispatch(Invocation &inv);

int run_replay(Invocation &inv, const std::string &manifest_path, const std::string &out_dir, bool out_dir_given)
{
    std::ifstream in(manifest_path);
    if (!in)
        throw ConfigError("--manifest", "cannot read '" + manifest_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const RunManifest m = manifest_from_json(buf.str());
    const Scenario s = parse_scenario(m.scenario_yaml);
    if (scenario_hash(s) != m.scenario_hash)
        throw ConfigError("--manifest", "embedded scenario does not match its hash");
    if (!m.command_line.empty() && m.command_line.front() == "replay")
        throw ConfigError("--manifest", "refusing to replay a replay");

    Invocation inner{m.command_line, inv.out, inv.err, &s, std::nullopt};
    if (out_dir_given)
        inner.out_dir_override = out_dir;
    return dispatch(inner);
}

int dispatch(Invocation &inv)
{
    CLI::App app{"Near-field RIS link-level simulator", "nfris"};
    app.require_subcommand(1);
    app.set_version_flag("--version", tool_version);

    Common sim_c, sweep_c, heat_c, cut_c, cb_c, ff_c;

    auto *simulate = app.add_subcommand("simulate", "Monte Carlo campaign at one beta (default 10 dB)");
    add_common(simulate, sim_c);

    auto *sweep = app.add_subcommand("sweep-beta", "Average SNR of every scheme over the beta list");
    add_common(sweep, sweep_c);

    HeatmapOptions heat_opt;
    auto *heat = app.add_subcommand("heatmap", "GRCS-SNR rasters of one codebook level over the blockage area");
    add_common(heat, heat_c);
    heat->add_option("--level", heat_opt.level, "Codebook level, 1-based (default: last)");
    heat->add_option("--grid", heat_opt.grid, "Samples per axis")->check(CLI::Range(2, 4096))->capture_default_str();
    heat->add_flag("--per-cell", heat_opt.per_cell, "Also write one raster per codeword");
    heat->add_option("--cell", heat_opt.cells, "Restrict to codeword 'x,y' (repeatable)");

    CutOptions cut_opt;
    auto *cut = app.add_subcommand("focus-cut", "SNR along x and y through the focal point");
    add_common(cut, cut_c);
    cut->add_option("--range", cut_opt.range, "Half-width of the scan in meters")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cut->add_option("--steps", cut_opt.steps, "Samples per axis")->check(CLI::Range(2, 100000))->capture_default_str();

    auto *cb = app.add_subcommand("codebook", "Codebook utilities");
    cb->require_subcommand(1);
    auto *dump = cb->add_subcommand("dump", "Export every codeword's phase vector (radians) as JSON");
    add_common(dump, cb_c);

    FarfieldOptions ff_opt;
    auto *ff = app.add_subcommand("farfield", "Far-field distance over RIS size and carrier");
    add_common(ff, ff_c);
    ff->add_option("--aperture", ff_opt.apertures, "Square RIS side lengths in meters (repeatable)");
    ff->add_option("--frequency-ghz", ff_opt.frequencies_ghz, "Carriers in GHz (repeatable)");

    std::string manifest_path;
    std::string replay_dir = ".";
    auto *replay = app.add_subcommand("replay", "Re-run the command recorded in a run manifest");
    replay->add_option("--manifest", manifest_path, "Manifest JSON")->required();
    auto *replay_dir_opt = replay->add_option("--out-dir", replay_dir, "Output directory (default: the recorded one)");

    if (!inv.args.empty() && !inv.args.front().starts_with("-"))
    {
        const auto subs = app.get_subcommands([](CLI::App *) { return true; });
        const bool known = std::any_of(subs.begin(), subs.end(),
                                       [&](const CLI::App *a) { return a->get_name() == inv.args.front(); });
        if (!known)
        {
            inv.err << "error: unknown subcommand '" << inv.args.front() << "'\n" << app.help();
            return 2;
        }
    }

    try
    {
        std::vector<std::string> reversed(inv.args.rbegin(), inv.args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, inv.out, inv.err);
        return code == 0 ? 0 : 2;
    }

    if (*simulate)
        return run_campaign(inv, sim_c, "simulate", "simulate", true);
    if (*sweep)
        return run_campaign(inv, sweep_c, "sweep-beta", "sweep", false);
    if (*heat)
        return run_heatmap(inv, heat_c, heat_opt);
    if (*cut)
        return run_focus_cut(inv, cut_c, cut_opt);
    if (*dump)
        return run_codebook_dump(inv, cb_c);
    if (*ff)
        return run_farfield(inv, ff_c, ff_opt);
    if (*replay)
        return run_replay(inv, manifest_path, replay_dir, replay_dir_opt->count() > 0);
    return 2;
}

} // namespace

int cli_dispatch(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    Invocation inv{args, out, err, nullptr, std::nullopt};
    try
    {
        return dispatch(inv);
    }
    catch (const ConfigError &e)
    {
        err << "error: invalid configuration: " << e.what() << '\n';
    }
    catch (const std::exception &e)
    {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

int cli_dispatch(int argc, char **argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_dispatch(args, std::cout, std::cerr);
}

} // namespace nfris
