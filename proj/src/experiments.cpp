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

#include "mimocrb/experiments.hpp"
#include "mimocrb/errors.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <sstream>
#include <thread>
#include <tuple>

namespace mimocrb
{
    namespace
    {
        constexpr std::uint64_t pilot_stream_purpose = 0x70696c6f74ULL; // "pilot"
        constexpr std::uint64_t path_stream_purpose = 0x7061746873ULL;  // "paths"

        constexpr std::array<Model, 2> all_models{Model::Structured, Model::Unstructured};
        constexpr std::array<Method, 2> all_methods{Method::OP, Method::SB};

        template <typename F>
        std::optional<CrbMatrix> try_bound(F &&f)
        {
            try
            {
                return f();
            }
            catch (const DegenerateInformation &)
            {
                return std::nullopt;
            }
        }

        void append_rows(SweepResult &out, double sweep_value, ArrayKind kind, const SingleResult &single,
                         std::uint64_t seed)
        {
            for (Model model : all_models)
                for (Method method : all_methods)
                {
                    const MethodSummary &s = single(model, method);
                    out.rows.push_back({sweep_value, kind, model, method, s.mean_crb, s.trials_used,
                                        s.deficient_rank_trials, seed});
                }
        }

        void report(const RunOptions &options, const std::string &line)
        {
            if (options.progress)
                options.progress(line);
        }

        // Runs both geometries of one sweep point on the same draws
        void run_pair(SweepResult &out, double sweep_value, const ScenarioConfig &cfg, const RunOptions &options)
        {
            ScenarioConfig ula = cfg, ucya = cfg;
            ula.geometry.kind = ArrayKind::ULA;
            ucya.geometry.kind = ArrayKind::UCyA;

            const SingleResult ula_result = run_single(ula, options);
            const SingleResult ucya_result = run_single(ucya, options);
            append_rows(out, sweep_value, ArrayKind::ULA, ula_result, cfg.master_seed);
            append_rows(out, sweep_value, ArrayKind::UCyA, ucya_result, cfg.master_seed);

            std::ostringstream line;
            line.precision(4);
            line << out.sweep_var << "=" << sweep_value << " ULA(" << cfg.geometry.n_ula << ") struct-SB "
                 << ula_result(Model::Structured, Method::SB).mean_crb << " | UCyA(" << cfg.geometry.n_uca << "x"
                 << cfg.geometry.n_3d << ") struct-SB " << ucya_result(Model::Structured, Method::SB).mean_crb
                 << " | unstruct-OP " << ula_result(Model::Unstructured, Method::OP).mean_crb;
            report(options, line.str());
        }
    }

    std::string_view to_string(Model m)
    {
        return m == Model::Structured ? "structured" : "unstructured";
    }

    std::string_view to_string(Method m)
    {
        return m == Method::OP ? "OP" : "SB";
    }

    std::string_view to_string(PilotKind k)
    {
        return k == PilotKind::Orthogonal ? "orthogonal" : "qpsk";
    }

    ArrayGeometry GeometrySpec::build() const
    {
        switch (kind)
        {
        case ArrayKind::ULA:
            return build_ula(n_ula, spacing_2d);
        case ArrayKind::UCA:
            return build_uca(n_uca, spacing_2d);
        case ArrayKind::UCyA:
            return build_ucya(n_uca, n_3d, spacing_2d, spacing_3d);
        }
        throw InvalidGeometry("unknown array kind");
    }

    double ScenarioConfig::noise_variance() const
    {
        return std::pow(10.0, -snr_db / 10.0);
    }

    void ScenarioConfig::validate() const
    {
        auto fail = [](const std::string &what) { throw std::invalid_argument(what); };
        if (num_tx < 1)
            fail("n-tx must be at least 1");
        if (num_paths < 1)
            fail("n-paths must be at least 1");
        if (num_subcarriers < 1)
            fail("k must be at least 1");
        if (num_pilots < 1)
            fail("k-pilot must be at least 1: the pilot-only bound is undefined without pilots");
        if (pilot_kind == PilotKind::Orthogonal && num_tx > num_subcarriers)
            fail("orthogonal pilots need n-tx <= k");
        if (!std::isfinite(snr_db))
            fail("snr-db must be finite");
        if (trials < 1)
            fail("trials must be at least 1");
        if (!(pinv_tolerance >= 0.0) || !std::isfinite(pinv_tolerance))
            fail("pseudo-inverse tolerance must be a non-negative finite number");
        if (!(geometry.spacing_2d > 0.0) || !(geometry.spacing_3d > 0.0) || !std::isfinite(geometry.spacing_2d) ||
            !std::isfinite(geometry.spacing_3d))
            fail("array spacings must be positive");
        if (geometry.n_ula < 1)
            fail("n-ula must be at least 1");
        if (geometry.n_uca < 2)
            fail("n-uca must be at least 2");
        if (geometry.n_3d < 1)
            fail("n-3d must be at least 1");
    }

    PilotConfig make_pilots(const ScenarioConfig &config)
    {
        arma::vec signal(config.num_tx, arma::fill::ones);
        if (config.pilot_kind == PilotKind::RandomQpsk)
        {
            RandomStream rng = derive_stream(config.master_seed, 0, pilot_stream_purpose);
            return PilotConfig::random_qpsk(rng, config.num_subcarriers, config.num_pilots, config.num_tx,
                                            config.noise_variance(), signal);
        }
        return PilotConfig::orthogonal(config.num_subcarriers, config.num_pilots, config.num_tx,
                                       config.noise_variance(), signal);
    }

    PathParameterSet draw_trial_parameters(const ScenarioConfig &config, std::uint64_t trial_index)
    {
        RandomStream rng = derive_stream(config.master_seed, trial_index, path_stream_purpose);
        return draw_path_parameters(rng, config.num_paths, config.num_tx, config.angle_unit);
    }

    TrialDetail evaluate_trial_detailed(const PathParameterSet &params, const ArrayGeometry &geometry,
                                        const PilotConfig &pilots, const ScenarioConfig &config)
    {
        const double tol = config.pinv_tolerance;
        const std::size_t n_rx = geometry.size();

        TrialDetail d{assemble_channel(params, geometry),
                      channel_jacobian(params, geometry, config.derivative_convention),
                      pilot_fim_unstructured(pilots, n_rx),
                      std::nullopt,
                      std::nullopt,
                      {},
                      std::nullopt,
                      {}};

        try
        {
            d.data_fim = data_fim_unstructured(d.channel, pilots, config.num_data, n_rx);
            d.semi_blind_fim = semi_blind_fim(d.pilot_fim, *d.data_fim);
        }
        catch (const SingularCovariance &)
        {
            // SB bounds stay empty for this trial
        }

        d.structured_pilot_fim = structured_fim(d.pilot_fim, d.jacobian);
        if (d.semi_blind_fim)
            d.structured_semi_blind_fim = structured_fim(*d.semi_blind_fim, d.jacobian);

        d.crb[slot(Model::Unstructured, Method::OP)] = try_bound([&] { return invert_fim(d.pilot_fim, tol); });
        d.crb[slot(Model::Structured, Method::OP)] =
            try_bound([&] { return structured_crb_on_h(d.structured_pilot_fim, d.jacobian, tol); });
        if (d.semi_blind_fim)
        {
            d.crb[slot(Model::Unstructured, Method::SB)] =
                try_bound([&] { return invert_fim(*d.semi_blind_fim, tol); });
            d.crb[slot(Model::Structured, Method::SB)] =
                try_bound([&] { return structured_crb_on_h(*d.structured_semi_blind_fim, d.jacobian, tol); });
        }
        return d;
    }

    TrialBounds evaluate_trial(const PathParameterSet &params, const ArrayGeometry &geometry,
                               const PilotConfig &pilots, const ScenarioConfig &config)
    {
        const TrialDetail d = evaluate_trial_detailed(params, geometry, pilots, config);
        TrialBounds out;
        for (Model model : all_models)
        {
            const std::size_t info_dim =
                model == Model::Structured ? d.structured_pilot_fim.dim() : d.pilot_fim.dim();
            for (Method method : all_methods)
            {
                const std::size_t s = slot(model, method);
                if (!d.crb[s])
                    continue;
                out.valid[s] = true;
                out.crb[s] = crb_scalar(*d.crb[s], config.reduction);
                out.deficient[s] = d.crb[s]->rank_deficient(info_dim);
            }
        }
        return out;
    }

    std::vector<TrialBounds> run_trials(const ScenarioConfig &config, const ArrayGeometry &geometry,
                                        const RunOptions &options)
    {
        config.validate();
        const PilotConfig pilots = make_pilots(config);
        std::vector<TrialBounds> results(config.trials);

        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;

        auto worker = [&]
        {
            for (std::size_t t = next++; t < results.size(); t = next++)
            {
                try
                {
                    results[t] = evaluate_trial(draw_trial_parameters(config, t), geometry, pilots, config);
                }
                catch (...)
                {
                    std::lock_guard lock(failure_mutex);
                    if (!failure)
                        failure = std::current_exception();
                    next = results.size();
                }
            }
        };

        const unsigned threads = std::max(1u, std::min<unsigned>(options.threads, unsigned(results.size())));
        if (threads == 1)
            worker();
        else
        {
            std::vector<std::jthread> pool;
            for (unsigned i = 0; i < threads; ++i)
                pool.emplace_back(worker);
        }
        if (failure)
            std::rethrow_exception(failure);
        return results;
    }

    SingleResult summarize(std::span<const TrialBounds> trials)
    {
        SingleResult out;
        for (std::size_t s = 0; s < 4; ++s)
        {
            MethodSummary &m = out.summary[s];
            double sum = 0.0;
            for (const TrialBounds &t : trials)
            {
                if (!t.valid[s])
                    continue;
                sum += t.crb[s];
                ++m.trials_used;
                if (t.deficient[s])
                    ++m.deficient_rank_trials;
            }
            if (m.trials_used == 0)
                throw DegenerateInformation("every trial failed to produce a finite bound");
            m.mean_crb = sum / double(m.trials_used);
        }
        return out;
    }

    SingleResult run_single(const ScenarioConfig &config, const RunOptions &options)
    {
        config.validate();
        const std::vector<TrialBounds> trials = run_trials(config, config.geometry.build(), options);
        return summarize(trials);
    }

    void sort_rows(SweepResult &result)
    {
        std::stable_sort(result.rows.begin(), result.rows.end(), [](const SweepRow &a, const SweepRow &b)
                         { return std::make_tuple(a.sweep_value, to_string(a.geometry), to_string(a.model),
                                                  to_string(a.method)) <
                                  std::make_tuple(b.sweep_value, to_string(b.geometry), to_string(b.model),
                                                  to_string(b.method)); });
    }

    SweepResult sweep_snr(const ScenarioConfig &base, std::span<const double> snr_values, const RunOptions &options)
    {
        if (snr_values.empty())
            throw std::invalid_argument("SNR sweep needs at least one value");
        SweepResult out{"snr_db", {}};
        for (double snr : snr_values)
        {
            ScenarioConfig cfg = base;
            cfg.snr_db = snr;
            run_pair(out, snr, cfg, options);
        }
        sort_rows(out);
        return out;
    }

    SweepResult sweep_layers(const ScenarioConfig &base, std::span<const std::size_t> n3d_values,
                             const RunOptions &options)
    {
        if (n3d_values.empty())
            throw std::invalid_argument("layer sweep needs at least one value");
        SweepResult out{"n_3d", {}};
        for (std::size_t layers : n3d_values)
        {
            ScenarioConfig cfg = base;
            cfg.geometry.n_3d = layers;
            cfg.geometry.n_ula = base.geometry.n_uca * layers;
            run_pair(out, double(layers), cfg, options);
        }
        sort_rows(out);
        return out;
    }

    SweepResult sweep_ring(const ScenarioConfig &base, std::span<const std::size_t> nuca_values,
                           const RunOptions &options)
    {
        if (nuca_values.empty())
            throw std::invalid_argument("ring sweep needs at least one value");
        SweepResult out{"n_uca", {}};
        for (std::size_t ring : nuca_values)
        {
            ScenarioConfig cfg = base;
            cfg.geometry.n_uca = ring;
            cfg.geometry.n_ula = base.geometry.n_3d * ring;
            run_pair(out, double(ring), cfg, options);
        }
        sort_rows(out);
        return out;
    }
}
