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

#include "mimocrb/channel.hpp"
#include "mimocrb/crb.hpp"
#include "mimocrb/fim.hpp"
#include "mimocrb/geometry.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mimocrb
{
    enum class PilotKind
    {
        Orthogonal,
        RandomQpsk
    };

    enum class Model
    {
        Structured,
        Unstructured
    };

    enum class Method
    {
        OP, // pilots only
        SB  // pilots plus unknown data
    };

    std::string_view to_string(Model m);
    std::string_view to_string(Method m);
    std::string_view to_string(PilotKind k);

    // Slot of a (model, method) pair in the four-entry per-trial arrays
    constexpr std::size_t slot(Model model, Method method)
    {
        return std::size_t(model) * 2 + std::size_t(method);
    }

    struct GeometrySpec
    {
        ArrayKind kind = ArrayKind::UCyA;
        std::size_t n_ula = 96;
        std::size_t n_uca = 24;
        std::size_t n_3d = 4;
        double spacing_2d = 0.5;
        double spacing_3d = 0.5;

        ArrayGeometry build() const;
    };

    struct ScenarioConfig
    {
        std::size_t num_tx = 2;
        std::size_t num_paths = 4;
        std::size_t num_subcarriers = 64;
        std::size_t num_pilots = 16;
        std::size_t num_data = 48;
        double snr_db = 10.0;
        GeometrySpec geometry;
        std::size_t trials = 50;
        std::uint64_t master_seed = 1;
        DerivativeConvention derivative_convention = DerivativeConvention::Paper;
        AngleUnit angle_unit = AngleUnit::Radians;
        PilotKind pilot_kind = PilotKind::Orthogonal;
        double pinv_tolerance = default_pinv_tolerance;
        CrbReduction reduction = CrbReduction::NormalizedTrace;

        // Unit transmit power per antenna, so the noise variance is 10^(-snr/10)
        double noise_variance() const;

        // Throws std::invalid_argument naming the first violated constraint
        void validate() const;
    };

    // Pilots used by every trial of a scenario; QPSK pilots come from a stream keyed by master_seed only
    PilotConfig make_pilots(const ScenarioConfig &config);

    // Parameters of trial `trial_index`; independent of the geometry so comparisons are paired
    PathParameterSet draw_trial_parameters(const ScenarioConfig &config, std::uint64_t trial_index);

    // Every intermediate of one trial on one geometry
    struct TrialDetail
    {
        ChannelVector channel;
        JacobianMatrix jacobian;
        FisherMatrix pilot_fim;
        std::optional<FisherMatrix> data_fim;
        std::optional<FisherMatrix> semi_blind_fim;
        FisherMatrix structured_pilot_fim;
        std::optional<FisherMatrix> structured_semi_blind_fim;
        std::array<std::optional<CrbMatrix>, 4> crb;
    };

    struct TrialBounds
    {
        std::array<double, 4> crb{};
        std::array<bool, 4> valid{};
        std::array<bool, 4> deficient{};
    };

    TrialDetail evaluate_trial_detailed(const PathParameterSet &params, const ArrayGeometry &geometry,
                                        const PilotConfig &pilots, const ScenarioConfig &config);

    TrialBounds evaluate_trial(const PathParameterSet &params, const ArrayGeometry &geometry,
                               const PilotConfig &pilots, const ScenarioConfig &config);

    struct RunOptions
    {
        unsigned threads = 1;
        std::function<void(const std::string &)> progress;
    };

    // Per-trial bounds in trial order, for config.trials trials on `geometry`
    std::vector<TrialBounds> run_trials(const ScenarioConfig &config, const ArrayGeometry &geometry,
                                        const RunOptions &options = {});

    struct MethodSummary
    {
        double mean_crb = 0.0;
        std::size_t trials_used = 0;
        std::size_t deficient_rank_trials = 0;
    };

    struct SingleResult
    {
        std::array<MethodSummary, 4> summary;

        const MethodSummary &operator()(Model model, Method method) const { return summary[slot(model, method)]; }
    };

    // Averages run_trials over trials; a slot where every trial failed rethrows DegenerateInformation
    SingleResult summarize(std::span<const TrialBounds> trials);

    SingleResult run_single(const ScenarioConfig &config, const RunOptions &options = {});

    struct SweepRow
    {
        double sweep_value = 0.0;
        ArrayKind geometry = ArrayKind::ULA;
        Model model = Model::Structured;
        Method method = Method::OP;
        double mean_crb = 0.0;
        std::size_t trials_used = 0;
        std::size_t deficient_rank_trials = 0;
        std::uint64_t seed = 0;
    };

    struct SweepResult
    {
        std::string sweep_var;
        std::vector<SweepRow> rows;
    };

    // Sorts rows by sweep value, then geometry, model and method names
    void sort_rows(SweepResult &result);

    // ULA(n_ula) and UCyA(n_uca x n_3d) at every SNR
    SweepResult sweep_snr(const ScenarioConfig &base, std::span<const double> snr_values,
                          const RunOptions &options = {});

    // UCyA(n_uca x v) against ULA(n_uca * v) at base.snr_db
    SweepResult sweep_layers(const ScenarioConfig &base, std::span<const std::size_t> n3d_values,
                             const RunOptions &options = {});

    // UCyA(v x n_3d) against ULA(n_3d * v) at base.snr_db
    SweepResult sweep_ring(const ScenarioConfig &base, std::span<const std::size_t> nuca_values,
                           const RunOptions &options = {});
}
