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

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mimocrb;
using namespace mimocrb::cli;
namespace fs = std::filesystem;

namespace
{
    Request parse(std::initializer_list<std::string> args)
    {
        const std::vector<std::string> v(args);
        return parse_config(v);
    }

    std::string slurp(const fs::path &p)
    {
        std::ifstream in(p, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::vector<std::string> lines_of(const std::string &text)
    {
        std::vector<std::string> out;
        std::istringstream in(text);
        for (std::string line; std::getline(in, line);)
            out.push_back(line);
        return out;
    }

    std::vector<std::string> split(const std::string &line)
    {
        std::vector<std::string> out;
        std::istringstream in(line);
        for (std::string f; std::getline(in, f, ',');)
            out.push_back(f);
        return out;
    }

    int run_cli(const std::string &args)
    {
        const std::string cmd = std::string(MIMOCRB_CLI_PATH) + " " + args + " 2>/dev/null";
        const int status = std::system(cmd.c_str());
        return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }

    struct TempDir
    {
        fs::path path;
        TempDir() : path(fs::temp_directory_path() / ("mimocrb_cli_" + std::to_string(::getpid())))
        {
            fs::create_directories(path);
        }
        ~TempDir() { fs::remove_all(path); }
    };

    const std::string small_flags = "--k 8 --k-pilot 2 --k-data 6 --n-ula 8 --n-uca 4 --n-3d 2";
}

TEST_CASE("parse_config defaults")
{
    SUBCASE("sweep-snr")
    {
        const Request r = parse({"sweep-snr"});
        CHECK(r.command == Subcommand::SweepSnr);
        CHECK(r.config.geometry.n_ula == 96);
        CHECK(r.config.geometry.n_uca == 24);
        CHECK(r.config.geometry.n_3d == 4);
        CHECK(r.config.num_tx == 2);
        CHECK(r.config.num_paths == 4);
        CHECK(r.config.num_subcarriers == 64);
        CHECK(r.config.num_pilots == 16);
        CHECK(r.config.num_data == 48);
        CHECK(r.config.geometry.spacing_2d == 0.5);
        CHECK(r.sweep_values == std::vector<double>{-10, -5, 0, 5, 10, 15, 20, 25, 30});
        CHECK(r.out_path == "sweep_snr.csv");
    }

    SUBCASE("sweep-layers")
    {
        const Request r = parse({"sweep-layers"});
        CHECK(r.command == Subcommand::SweepLayers);
        CHECK(r.config.geometry.n_uca == 24);
        CHECK(r.config.snr_db == 5.0);
        CHECK(r.sweep_values == std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8});
    }

    SUBCASE("sweep-ring")
    {
        const Request r = parse({"sweep-ring"});
        CHECK(r.command == Subcommand::SweepRing);
        CHECK(r.config.geometry.n_3d == 4);
        CHECK(r.config.snr_db == 5.0);
        CHECK(r.sweep_values == std::vector<double>{8, 16, 24, 32, 40, 48, 56, 64});
    }

    SUBCASE("single and enum flags")
    {
        const Request r = parse({"single", "--derivative-convention", "wirtinger", "--angle-unit", "degrees",
                                 "--pilots", "qpsk", "--reduction", "sum-trace", "--snr-db", "-3.5"});
        CHECK(r.command == Subcommand::Single);
        CHECK(r.config.snr_db == -3.5);
        CHECK(r.config.derivative_convention == DerivativeConvention::Wirtinger);
        CHECK(r.config.angle_unit == AngleUnit::Degrees);
        CHECK(r.config.pilot_kind == PilotKind::RandomQpsk);
        CHECK(r.config.reduction == CrbReduction::SumTrace);
    }

    SUBCASE("flags may precede the subcommand")
    {
        const Request r = parse({"--trials", "3", "sweep-snr", "--seed", "4"});
        CHECK(r.config.trials == 3);
        CHECK(r.config.master_seed == 4);
    }
}

TEST_CASE("parse_config errors")
{
    CHECK_THROWS_AS(parse({"sweep-snr", "--k-pilot", "0"}), UsageError);
    CHECK_THROWS_AS(parse({"sweep-snr", "--no-such-flag"}), UsageError);
    CHECK_THROWS_AS(parse({"sweep-snr", "--trials", "many"}), UsageError);
    CHECK_THROWS_AS(parse({"sweep-snr", "--derivative-convention", "other"}), UsageError);
    CHECK_THROWS_AS(parse({"sweep-layers", "--values", "1.5"}), UsageError);
    CHECK_THROWS_AS(parse({"sweep-ring", "--values", "1"}), UsageError);
    CHECK_THROWS_AS(parse({"sweep-snr", "--threads", "0"}), UsageError);
    CHECK_THROWS_AS(parse({}), UsageError);
    CHECK(parse({"--help"}).help_text.has_value());
}

TEST_CASE("config file precedence")
{
    TempDir dir;
    const fs::path cfg = dir.path / "run.ini";
    std::ofstream(cfg) << "trials = 11\nseed = 5\nk-data = 7\n";
    const Request r = parse({"sweep-snr", "--config", cfg.string(), "--seed", "9"});
    CHECK(r.config.trials == 11);
    CHECK(r.config.num_data == 7);
    CHECK(r.config.master_seed == 9);
    CHECK(r.config.num_pilots == 16);
}

TEST_CASE("write_csv")
{
    SUBCASE("empty result is header only")
    {
        std::ostringstream out;
        write_csv(SweepResult{"snr_db", {}}, out);
        CHECK(out.str() == "sweep_var,sweep_value,geometry,model,method,mean_crb,trials_used,deficient_rank_trials,seed\n");
    }

    SUBCASE("round trip recovers every value exactly")
    {
        SweepResult res{"snr_db", {}};
        const double values[] = {1.0 / 3.0, 6.02214076e23, 4.9406564584124654e-324, 0.0, 2.2250738585072014e-308};
        std::uint64_t seed = 18446744073709551615ull;
        for (double v : values)
            res.rows.push_back({-7.25, ArrayKind::UCyA, Model::Unstructured, Method::SB, v, 50, 3, seed});
        std::ostringstream out;
        write_csv(res, out);
        const auto lines = lines_of(out.str());
        REQUIRE(lines.size() == 6);
        for (std::size_t i = 1; i < lines.size(); ++i)
        {
            const auto f = split(lines[i]);
            REQUIRE(f.size() == 9);
            CHECK(f[0] == "snr_db");
            CHECK(std::strtod(f[1].c_str(), nullptr) == -7.25);
            CHECK(f[2] == "UCyA");
            CHECK(f[3] == "unstructured");
            CHECK(f[4] == "SB");
            CHECK(std::strtod(f[5].c_str(), nullptr) == values[i - 1]);
            CHECK(f[6] == "50");
            CHECK(f[7] == "3");
            CHECK(f[8] == "18446744073709551615");
        }
    }

    SUBCASE("unwritable path")
    {
        CHECK_THROWS_AS(write_csv(SweepResult{"snr_db", {}}, std::string("/nonexistent/dir/out.csv")),
                        std::runtime_error);
    }
}

TEST_CASE("geometry CSV")
{
    std::ostringstream out;
    write_geometry_csv(build_ucya(24, 4, 0.5, 0.5), out);
    const auto lines = lines_of(out.str());
    REQUIRE(lines.size() == 97);
    CHECK(lines[0] == "element_index,x,y,z");
    CHECK(split(lines[96])[0] == "95");
}

TEST_CASE("executable")
{
    TempDir dir;
    const auto p = [&](const char *name) { return (dir.path / name).string(); };

    SUBCASE("exit status on usage errors")
    {
        CHECK(run_cli("sweep-snr --k-pilot 0 --out " + p("x.csv")) != 0);
        CHECK(run_cli("sweep-snr --bogus") != 0);
        CHECK_FALSE(fs::exists(p("x.csv")));
    }

    SUBCASE("unwritable output is a failure")
    {
        CHECK(run_cli("single " + small_flags + " --trials 2 --out /nonexistent/dir/out.csv") != 0);
    }

    SUBCASE("manifest echoes the resolved configuration")
    {
        REQUIRE(run_cli("single " + small_flags + " --trials 5 --seed 7 --out " + p("s.csv")) == 0);
        const auto manifest = lines_of(slurp(p("s.csv.manifest")));
        auto has = [&](const std::string &l) { return std::find(manifest.begin(), manifest.end(), l) != manifest.end(); };
        CHECK(has("trials=5"));
        CHECK(has("seed=7"));
        CHECK(has("subcommand=single"));
        CHECK(has("k-pilot=2"));
        CHECK(has("derivative-convention=paper"));
        CHECK(lines_of(slurp(p("s.csv"))).size() == 9);
    }

    SUBCASE("reruns are byte-identical, independent of thread count")
    {
        const std::string base = "sweep-snr " + small_flags + " --trials 2 --values -5,5 --seed 3";
        REQUIRE(run_cli(base + " --threads 1 --out " + p("a.csv")) == 0);
        REQUIRE(run_cli(base + " --threads 1 --out " + p("b.csv")) == 0);
        REQUIRE(run_cli(base + " --threads 3 --out " + p("c.csv")) == 0);
        const std::string a = slurp(p("a.csv"));
        CHECK(a.size() > 0);
        CHECK(a == slurp(p("b.csv")));
        CHECK(a == slurp(p("c.csv")));
        CHECK(lines_of(a).size() == 17);
    }

    SUBCASE("the manifest reproduces the run")
    {
        REQUIRE(run_cli("sweep-ring " + small_flags + " --trials 2 --values 3 --seed 12 --out " + p("r.csv")) == 0);
        std::string ini;
        for (const std::string &line : lines_of(slurp(p("r.csv.manifest"))))
        {
            const std::string key = line.substr(0, line.find('='));
            if (key != "tool_version" && key != "started_at" && key != "completed_at" && key != "output_path" &&
                key != "subcommand")
                ini += line + "\n";
        }
        std::ofstream(p("r.ini")) << ini;
        REQUIRE(run_cli("sweep-ring --config " + p("r.ini") + " --out " + p("r2.csv")) == 0);
        CHECK(slurp(p("r.csv")) == slurp(p("r2.csv")));
    }

    SUBCASE("dump-geometry")
    {
        REQUIRE(run_cli("dump-geometry --ucya 24 4 --out " + p("g.csv")) == 0);
        CHECK(lines_of(slurp(p("g.csv"))).size() == 97);
        REQUIRE(run_cli("dump-geometry --ula 5 --out " + p("u.csv")) == 0);
        CHECK(lines_of(slurp(p("u.csv"))).size() == 6);
    }

    SUBCASE("channel dump")
    {
        REQUIRE(run_cli("single " + small_flags + " --trials 2 --dump-channel " + p("h.csv") + " --out " + p("s.csv")) == 0);
        const auto lines = lines_of(slurp(p("h.csv")));
        CHECK(lines[0] == "geometry,rx,tx,re,im");
        CHECK(lines.size() == 1 + 2 * 8 * 2);
    }
}
