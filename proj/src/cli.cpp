// SPDX-License-Identifier: Apache-2.0
//
// mimocrb: Cramer-Rao bounds for structured MIMO-OFDM channel estimation
// Copyright (C) 2026 The mimocrb authors
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

#include "mimocrb/cli.hpp"
#include "mimocrb/errors.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cstdio>
#include <cstring>
#include <ctime>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#ifndef MIMOCRB_VERSION
#define MIMOCRB_VERSION "unknown"
#endif

namespace mimocrb::cli
{
    namespace
    {
        const std::map<std::string, DerivativeConvention> convention_names{
            {"paper", DerivativeConvention::Paper}, {"wirtinger", DerivativeConvention::Wirtinger}};
        const std::map<std::string, AngleUnit> angle_names{{"radians", AngleUnit::Radians},
                                                           {"degrees", AngleUnit::Degrees}};
        const std::map<std::string, PilotKind> pilot_names{{"orthogonal", PilotKind::Orthogonal},
                                                           {"qpsk", PilotKind::RandomQpsk}};
        const std::map<std::string, CrbReduction> reduction_names{{"normalized-trace", CrbReduction::NormalizedTrace},
                                                                  {"sum-trace", CrbReduction::SumTrace}};

        template <typename E>
        std::string name_of(const std::map<std::string, E> &names, E value)
        {
            for (const auto &[k, v] : names)
                if (v == value)
                    return k;
            return "?";
        }

        std::string fmt_g(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17g", v);
            return buf;
        }

        std::string fmt_e(double v)
        {
            char buf[64];
            std::snprintf(buf, sizeof buf, "%.17e", v);
            return buf;
        }

        std::string utc_now()
        {
            const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            std::tm tm{};
            gmtime_r(&t, &tm);
            char buf[32];
            std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
            return buf;
        }

        std::vector<double> default_sweep(Subcommand c)
        {
            switch (c)
            {
            case Subcommand::SweepSnr:
                return {-10, -5, 0, 5, 10, 15, 20, 25, 30};
            case Subcommand::SweepLayers:
                return {1, 2, 3, 4, 5, 6, 7, 8};
            case Subcommand::SweepRing:
                return {8, 16, 24, 32, 40, 48, 56, 64};
            default:
                return {};
            }
        }

        std::string default_out(Subcommand c)
        {
            switch (c)
            {
            case Subcommand::SweepSnr:
                return "sweep_snr.csv";
            case Subcommand::SweepLayers:
                return "sweep_layers.csv";
            case Subcommand::SweepRing:
                return "sweep_ring.csv";
            case Subcommand::Single:
                return "single.csv";
            case Subcommand::DumpGeometry:
                return "-";
            }
            return "-";
        }

        std::vector<std::size_t> as_counts(const std::vector<double> &values, const char *what)
        {
            std::vector<std::size_t> out;
            for (double v : values)
            {
                if (!(v >= 1.0) || v != std::floor(v))
                    throw UsageError(std::string(what) + " values must be positive integers");
                out.push_back(std::size_t(v));
            }
            return out;
        }

        // Opens `path` for writing, or hands back std::cout for "-"
        class OutputFile
        {
        public:
            explicit OutputFile(const std::string &path) : path_(path)
            {
                if (path_ == "-")
                    return;
                file_.open(path_, std::ios::out | std::ios::trunc);
                if (!file_)
                    throw std::runtime_error("cannot open '" + path_ + "' for writing: " + std::strerror(errno));
            }

            std::ostream &stream() { return path_ == "-" ? std::cout : file_; }

            void close()
            {
                stream().flush();
                if (path_ != "-")
                    file_.close();
                if (!stream())
                    throw std::runtime_error("failed writing '" + path_ + "': " + std::strerror(errno));
            }

        private:
            std::string path_;
            std::ofstream file_;
        };
    }

    std::string_view to_string(Subcommand c)
    {
        switch (c)
        {
        case Subcommand::SweepSnr:
            return "sweep-snr";
        case Subcommand::SweepLayers:
            return "sweep-layers";
        case Subcommand::SweepRing:
            return "sweep-ring";
        case Subcommand::Single:
            return "single";
        case Subcommand::DumpGeometry:
            return "dump-geometry";
        }
        return "?";
    }

    std::string tool_version()
    {
        return MIMOCRB_VERSION;
    }

    Request parse_config(std::span<const std::string> args)
    {
        Request req;
        ScenarioConfig &cfg = req.config;

        CLI::App app{"Cramer-Rao bounds for pilot-only and semi-blind MIMO-OFDM channel estimation", "mimocrb"};
        app.require_subcommand(1);
        app.set_config("--config", "", "Flat key = value file mirroring the long flags");

        std::optional<double> snr_db;
        std::string out_path;
        app.add_option("--trials", cfg.trials, "Monte-Carlo trials per point")->capture_default_str();
        app.add_option("--seed", cfg.master_seed, "Master seed")->capture_default_str();
        app.add_option("--snr-db", snr_db, "SNR in dB (fixed-SNR runs)");
        app.add_option("--n-tx", cfg.num_tx, "Transmit antennas")->capture_default_str();
        app.add_option("--n-paths", cfg.num_paths, "Paths per transmit antenna")->capture_default_str();
        app.add_option("--k", cfg.num_subcarriers, "Subcarriers")->capture_default_str();
        app.add_option("--k-pilot", cfg.num_pilots, "Pilot OFDM symbols")->capture_default_str();
        app.add_option("--k-data", cfg.num_data, "Data OFDM symbols")->capture_default_str();
        app.add_option("--n-ula", cfg.geometry.n_ula, "ULA elements")->capture_default_str();
        app.add_option("--n-uca", cfg.geometry.n_uca, "Elements per UCA ring")->capture_default_str();
        app.add_option("--n-3d", cfg.geometry.n_3d, "UCyA layers")->capture_default_str();
        app.add_option("--spacing-2d", cfg.geometry.spacing_2d, "In-plane spacing, wavelengths")
            ->capture_default_str();
        app.add_option("--spacing-3d", cfg.geometry.spacing_3d, "Layer spacing, wavelengths")->capture_default_str();
        std::string convention = "paper", angle_unit = "radians", pilots = "orthogonal", reduction = "normalized-trace";
        app.add_option("--derivative-convention", convention, "paper | wirtinger")
            ->check(CLI::IsMember(convention_names))
            ->capture_default_str();
        app.add_option("--angle-unit", angle_unit, "radians | degrees")
            ->check(CLI::IsMember(angle_names))
            ->capture_default_str();
        app.add_option("--pilots", pilots, "orthogonal | qpsk")->check(CLI::IsMember(pilot_names))->capture_default_str();
        app.add_option("--pinv-tolerance", cfg.pinv_tolerance, "Relative eigenvalue cutoff")->capture_default_str();
        app.add_option("--reduction", reduction, "normalized-trace | sum-trace")
            ->check(CLI::IsMember(reduction_names))
            ->capture_default_str();
        app.add_option("--values", req.sweep_values, "Sweep points, space or comma separated")->delimiter(',');
        app.add_option("--threads", req.threads, "Worker threads")->capture_default_str();
        app.add_option("--out", out_path, "Output CSV path, - for standard output");

        auto *snr = app.add_subcommand("sweep-snr", "Bounds versus SNR for ULA and UCyA")->fallthrough();
        auto *layers = app.add_subcommand("sweep-layers", "Bounds versus UCyA layer count")->fallthrough();
        auto *ring = app.add_subcommand("sweep-ring", "Bounds versus UCA ring size")->fallthrough();
        auto *single = app.add_subcommand("single", "One SNR point for ULA and UCyA")->fallthrough();
        std::string channel_dump;
        single->add_option("--dump-channel", channel_dump, "Write the trial-0 channel of each geometry to CSV");
        auto *dump = app.add_subcommand("dump-geometry", "Write element coordinates as CSV")->fallthrough();
        std::size_t dump_ula = 0, dump_uca = 0;
        std::vector<std::size_t> dump_ucya;
        auto *opt_ula = dump->add_option("--ula", dump_ula, "ULA with N elements");
        auto *opt_uca = dump->add_option("--uca", dump_uca, "Single UCA ring of N elements");
        auto *opt_ucya = dump->add_option("--ucya", dump_ucya, "UCyA ring size and layer count")->expected(2);
        opt_ula->excludes(opt_uca)->excludes(opt_ucya);
        opt_uca->excludes(opt_ucya);
        app.require_subcommand(1);

        std::vector<std::string> reversed(args.rbegin(), args.rend());
        try
        {
            app.parse(reversed);
        }
        catch (const CLI::CallForHelp &)
        {
            req.help_text = app.help();
            return req;
        }
        catch (const CLI::ParseError &e)
        {
            throw UsageError(std::string(e.what()) + "\nRun with --help for usage.");
        }

        cfg.derivative_convention = convention_names.at(convention);
        cfg.angle_unit = angle_names.at(angle_unit);
        cfg.pilot_kind = pilot_names.at(pilots);
        cfg.reduction = reduction_names.at(reduction);

        if (snr->parsed())
            req.command = Subcommand::SweepSnr;
        else if (layers->parsed())
            req.command = Subcommand::SweepLayers;
        else if (ring->parsed())
            req.command = Subcommand::SweepRing;
        else if (single->parsed())
            req.command = Subcommand::Single;
        else
            req.command = Subcommand::DumpGeometry;

        // Fixed-SNR runs default to 5 dB except a lone point, which defaults to 10 dB
        cfg.snr_db = snr_db.value_or(req.command == Subcommand::Single ? 10.0 : 5.0);
        if (req.sweep_values.empty())
            req.sweep_values = default_sweep(req.command);
        req.out_path = out_path.empty() ? default_out(req.command) : out_path;
        if (!channel_dump.empty())
            req.channel_dump_path = channel_dump;

        if (req.command == Subcommand::SweepLayers)
            as_counts(req.sweep_values, "--values (layer counts)");
        if (req.command == Subcommand::SweepRing)
            for (std::size_t v : as_counts(req.sweep_values, "--values (ring sizes)"))
                if (v < 2)
                    throw UsageError("ring sizes must be at least 2");
        if (req.command == Subcommand::SweepSnr && std::any_of(req.sweep_values.begin(), req.sweep_values.end(),
                                                               [](double v) { return !std::isfinite(v); }))
            throw UsageError("SNR values must be finite");
        if (req.threads == 0)
            throw UsageError("--threads must be at least 1");

        if (req.command == Subcommand::DumpGeometry)
        {
            GeometrySpec g = cfg.geometry;
            if (opt_ula->count() > 0)
            {
                g.kind = ArrayKind::ULA;
                g.n_ula = dump_ula;
            }
            else if (opt_uca->count() > 0)
            {
                g.kind = ArrayKind::UCA;
                g.n_uca = dump_uca;
            }
            else if (opt_ucya->count() > 0)
            {
                g.kind = ArrayKind::UCyA;
                g.n_uca = dump_ucya.at(0);
                g.n_3d = dump_ucya.at(1);
            }
            req.dump_geometry = g;
        }

        try
        {
            cfg.validate();
        }
        catch (const std::invalid_argument &e)
        {
            throw UsageError(std::string("invalid configuration: ") + e.what());
        }
        return req;
    }

    void write_csv(const SweepResult &result, std::ostream &out)
    {
        out << "sweep_var,sweep_value,geometry,model,method,mean_crb,trials_used,deficient_rank_trials,seed\n";
        for (const SweepRow &r : result.rows)
            out << result.sweep_var << ',' << fmt_g(r.sweep_value) << ',' << to_string(r.geometry) << ','
                << to_string(r.model) << ',' << to_string(r.method) << ',' << fmt_e(r.mean_crb) << ','
                << r.trials_used << ',' << r.deficient_rank_trials << ',' << r.seed << '\n';
    }

    void write_csv(const SweepResult &result, const std::string &path)
    {
        OutputFile file(path);
        write_csv(result, file.stream());
        file.close();
    }

    void write_geometry_csv(const ArrayGeometry &geometry, std::ostream &out)
    {
        out << "element_index,x,y,z\n";
        for (std::size_t i = 0; i < geometry.size(); ++i)
        {
            const ElementPosition &p = geometry.element(i);
            out << i << ',' << fmt_g(p.x) << ',' << fmt_g(p.y) << ',' << fmt_g(p.z) << '\n';
        }
    }

    void write_channel_csv(const std::vector<std::pair<ArrayKind, ChannelVector>> &channels, std::ostream &out)
    {
        out << "geometry,rx,tx,re,im\n";
        for (const auto &[kind, h] : channels)
            for (std::size_t r = 0; r < h.num_rx; ++r)
                for (std::size_t j = 0; j < h.num_tx; ++j)
                    out << to_string(kind) << ',' << r << ',' << j << ',' << fmt_e(h(r, j).real()) << ','
                        << fmt_e(h(r, j).imag()) << '\n';
    }

    void write_manifest(const RunManifest &m, std::ostream &out)
    {
        const Request &req = m.request;
        const ScenarioConfig &c = req.config;
        std::string values;
        for (double v : req.sweep_values)
            values += (values.empty() ? "" : ",") + fmt_g(v);

        out << "tool_version=" << m.tool_version << '\n'
            << "started_at=" << m.started_at << '\n'
            << "completed_at=" << m.completed_at << '\n'
            << "output_path=" << m.output_path << '\n'
            << "subcommand=" << to_string(req.command) << '\n'
            << "values=" << values << '\n'
            << "threads=" << req.threads << '\n'
            << "trials=" << c.trials << '\n'
            << "seed=" << c.master_seed << '\n'
            << "snr-db=" << fmt_g(c.snr_db) << '\n'
            << "n-tx=" << c.num_tx << '\n'
            << "n-paths=" << c.num_paths << '\n'
            << "k=" << c.num_subcarriers << '\n'
            << "k-pilot=" << c.num_pilots << '\n'
            << "k-data=" << c.num_data << '\n'
            << "n-ula=" << c.geometry.n_ula << '\n'
            << "n-uca=" << c.geometry.n_uca << '\n'
            << "n-3d=" << c.geometry.n_3d << '\n'
            << "spacing-2d=" << fmt_g(c.geometry.spacing_2d) << '\n'
            << "spacing-3d=" << fmt_g(c.geometry.spacing_3d) << '\n'
            << "derivative-convention=" << name_of(convention_names, c.derivative_convention) << '\n'
            << "angle-unit=" << name_of(angle_names, c.angle_unit) << '\n'
            << "pilots=" << name_of(pilot_names, c.pilot_kind) << '\n'
            << "pinv-tolerance=" << fmt_g(c.pinv_tolerance) << '\n'
            << "reduction=" << name_of(reduction_names, c.reduction) << '\n';
    }

    std::string manifest_path(const std::string &out_path)
    {
        return out_path + ".manifest";
    }

    int run(const Request &req, std::ostream &err)
    {
        if (req.help_text)
        {
            std::cout << *req.help_text;
            return 0;
        }

        RunManifest manifest{req, tool_version(), utc_now(), "", req.out_path};
        RunOptions options{req.threads, [&err](const std::string &line) { err << line << std::endl; }};
        const ScenarioConfig &cfg = req.config;

        try
        {
            SweepResult result;
            switch (req.command)
            {
            case Subcommand::DumpGeometry:
            {
                OutputFile file(req.out_path);
                write_geometry_csv(req.dump_geometry.value_or(cfg.geometry).build(), file.stream());
                file.close();
                return 0;
            }
            case Subcommand::SweepSnr:
                result = sweep_snr(cfg, req.sweep_values, options);
                break;
            case Subcommand::SweepLayers:
                result = sweep_layers(cfg, as_counts(req.sweep_values, "layer"), options);
                break;
            case Subcommand::SweepRing:
                result = sweep_ring(cfg, as_counts(req.sweep_values, "ring"), options);
                break;
            case Subcommand::Single:
            {
                const std::vector<double> point{cfg.snr_db};
                result = sweep_snr(cfg, point, options);
                if (req.channel_dump_path)
                {
                    std::vector<std::pair<ArrayKind, ChannelVector>> channels;
                    const PathParameterSet params = draw_trial_parameters(cfg, 0);
                    for (ArrayKind kind : {ArrayKind::ULA, ArrayKind::UCyA})
                    {
                        GeometrySpec g = cfg.geometry;
                        g.kind = kind;
                        channels.emplace_back(kind, assemble_channel(params, g.build()));
                    }
                    OutputFile file(*req.channel_dump_path);
                    write_channel_csv(channels, file.stream());
                    file.close();
                }
                break;
            }
            }

            write_csv(result, req.out_path);
            manifest.completed_at = utc_now();
            if (req.out_path != "-")
            {
                OutputFile file(manifest_path(req.out_path));
                write_manifest(manifest, file.stream());
                file.close();
            }
            return 0;
        }
        catch (const std::exception &e)
        {
            err << "mimocrb " << to_string(req.command) << ": " << e.what() << std::endl;
            return 1;
        }
    }

    int main_entry(int argc, const char *const *argv)
    {
        std::vector<std::string> args(argv + 1, argv + argc);
        try
        {
            return run(parse_config(args), std::cerr);
        }
        catch (const UsageError &e)
        {
            std::cerr << "mimocrb: " << e.what() << std::endl;
            return 2;
        }
    }
}
