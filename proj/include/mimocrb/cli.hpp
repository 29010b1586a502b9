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

#pragma once

#include "mimocrb/experiments.hpp"

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mimocrb::cli
{
    enum class Subcommand
    {
        SweepSnr,
        SweepLayers,
        SweepRing,
        Single,
        DumpGeometry
    };

    std::string_view to_string(Subcommand c);

    // Bad flags, unparsable values or a configuration that violates its invariants
    class UsageError : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    struct Request
    {
        Subcommand command = Subcommand::Single;
        ScenarioConfig config;
        std::vector<double> sweep_values; // SNRs in dB, layer counts or ring sizes
        unsigned threads = 1;
        std::string out_path;                 // "-" is standard output
        std::optional<std::string> channel_dump_path;
        std::optional<GeometrySpec> dump_geometry; // dump-geometry only
        std::optional<std::string> help_text; // set when --help was requested
    };

    struct RunManifest
    {
        Request request; // fully resolved, defaults applied
        std::string tool_version;
        std::string started_at;
        std::string completed_at;
        std::string output_path;
    };

    std::string tool_version();

    /*!
     * Parses command-line arguments (without the program name). Precedence is flag, then --config
     * file, then built-in defaults. Throws UsageError.
     */
    Request parse_config(std::span<const std::string> args);

    void write_csv(const SweepResult &result, std::ostream &out);

    // Writes to `path`, or to standard output for "-"; throws std::runtime_error naming the path on failure
    void write_csv(const SweepResult &result, const std::string &path);

    void write_geometry_csv(const ArrayGeometry &geometry, std::ostream &out);

    // Trial-0 channel for every geometry of the request: geometry,rx,tx,re,im
    void write_channel_csv(const std::vector<std::pair<ArrayKind, ChannelVector>> &channels, std::ostream &out);

    void write_manifest(const RunManifest &manifest, std::ostream &out);

    // Path of the manifest that accompanies a results file
    std::string manifest_path(const std::string &out_path);

    // Executes a parsed request; returns the process exit status
    int run(const Request &request, std::ostream &err);

    // Full entry point: parse, run, report; returns the process exit status
    int main_entry(int argc, const char *const *argv);
}
