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

#include "mimocrb/channel.hpp"
#include "mimocrb/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mimocrb
{
    PathParameterSet::PathParameterSet(arma::cx_mat gains, arma::mat zeniths, arma::mat azimuths)
        : gains_(std::move(gains)), zeniths_(std::move(zeniths)), azimuths_(std::move(azimuths))
    {
        if (gains_.n_elem == 0)
            throw ShapeError("path parameters need at least one path and one transmit antenna");
        if (zeniths_.n_rows != gains_.n_rows || zeniths_.n_cols != gains_.n_cols ||
            azimuths_.n_rows != gains_.n_rows || azimuths_.n_cols != gains_.n_cols)
            throw ShapeError("gain, zenith and azimuth matrices must share one shape");
        if (!gains_.is_finite() || !zeniths_.is_finite() || !azimuths_.is_finite())
            throw std::invalid_argument("path parameters must be finite");
    }

    double steering_phase(double zenith, double azimuth, const ElementPosition &position)
    {
        const double st = std::sin(zenith);
        return st * std::cos(azimuth) * position.x + st * std::sin(azimuth) * position.y + std::cos(zenith) * position.z;
    }

    cplx channel_coefficient(const PathParameterSet &params, std::size_t tx_index, const ElementPosition &position)
    {
        if (tx_index >= params.num_tx())
            throw std::out_of_range("transmit index " + std::to_string(tx_index) + " out of range");

        cplx sum = 0.0;
        for (std::size_t l = 0; l < params.num_paths(); ++l)
        {
            const double phase = 2.0 * std::numbers::pi *
                                 steering_phase(params.zeniths()(l, tx_index), params.azimuths()(l, tx_index), position);
            sum += params.gains()(l, tx_index) * std::polar(1.0, -phase);
        }
        return sum;
    }

    ChannelVector assemble_channel(const PathParameterSet &params, const ArrayGeometry &geometry)
    {
        if (geometry.size() == 0)
            throw std::invalid_argument("geometry has no elements");

        const std::size_t n_tx = params.num_tx();
        ChannelVector h{arma::cx_vec(n_tx * geometry.size()), n_tx, geometry.size()};
        for (std::size_t r = 0; r < geometry.size(); ++r)
            for (std::size_t j = 0; j < n_tx; ++j)
                h.entries(r * n_tx + j) = channel_coefficient(params, j, geometry.element(r));
        return h;
    }

    PathParameterSet draw_path_parameters(RandomStream &rng, std::size_t num_paths, std::size_t num_tx, AngleUnit unit)
    {
        if (num_paths == 0 || num_tx == 0)
            throw std::invalid_argument("num_paths and num_tx must be positive");

        constexpr double half_pi = 0.5 * std::numbers::pi;
        const double scale = unit == AngleUnit::Degrees ? std::numbers::pi / 180.0 : 1.0;

        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        std::uniform_real_distribution<double> uniform(-half_pi, half_pi);
        auto open_uniform = [&]
        {
            double v;
            do
                v = uniform(rng);
            while (v == -half_pi);
            return v * scale;
        };

        arma::cx_mat gains(num_paths, num_tx);
        arma::mat zeniths(num_paths, num_tx), azimuths(num_paths, num_tx);

        // Fixed draw order (column-major, gain then zenith then azimuth) keeps streams reproducible
        for (std::size_t j = 0; j < num_tx; ++j)
            for (std::size_t l = 0; l < num_paths; ++l)
            {
                const double re = normal(rng);
                const double im = normal(rng);
                gains(l, j) = {re, im};
                zeniths(l, j) = open_uniform();
                azimuths(l, j) = open_uniform();
            }
        return PathParameterSet(std::move(gains), std::move(zeniths), std::move(azimuths));
    }
}
