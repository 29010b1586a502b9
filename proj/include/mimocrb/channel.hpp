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

#include "mimocrb/geometry.hpp"
#include "mimocrb/random.hpp"

#include <armadillo>
#include <complex>
#include <cstddef>

namespace mimocrb
{
    using cplx = std::complex<double>;

    enum class AngleUnit
    {
        Radians,
        Degrees
    };

    /*!
     * Specular path parameters, one entry per (path l, transmit antenna j). All three matrices are
     * num_paths x num_tx. Angles are in radians.
     */
    class PathParameterSet
    {
    public:
        PathParameterSet(arma::cx_mat gains, arma::mat zeniths, arma::mat azimuths);

        const arma::cx_mat &gains() const { return gains_; }
        const arma::mat &zeniths() const { return zeniths_; }
        const arma::mat &azimuths() const { return azimuths_; }

        std::size_t num_paths() const { return gains_.n_rows; }
        std::size_t num_tx() const { return gains_.n_cols; }

    private:
        arma::cx_mat gains_;
        arma::mat zeniths_;
        arma::mat azimuths_;
    };

    // Stacked channel h, receive-antenna major: entry r * num_tx + j holds h_{r,j}.
    struct ChannelVector
    {
        arma::cx_vec entries;
        std::size_t num_tx = 0;
        std::size_t num_rx = 0;

        std::size_t size() const { return entries.n_elem; }
        cplx operator()(std::size_t rx, std::size_t tx) const { return entries(rx * num_tx + tx); }
        cplx operator[](std::size_t i) const { return entries(i); }
    };

    // Projection of the arrival direction onto the element position, in wavelengths
    double steering_phase(double zenith, double azimuth, const ElementPosition &position);

    // Narrowband coefficient between transmit antenna `tx_index` and the element at `position`
    cplx channel_coefficient(const PathParameterSet &params, std::size_t tx_index, const ElementPosition &position);

    ChannelVector assemble_channel(const PathParameterSet &params, const ArrayGeometry &geometry);

    /*!
     * Draws CN(0,1) gains and angles uniform on the open interval (-pi/2, pi/2).
     *
     * With AngleUnit::Degrees the interval is read as degrees, i.e. the angles in radians are drawn
     * from (-pi/2, pi/2) * pi / 180.
     */
    PathParameterSet draw_path_parameters(RandomStream &rng, std::size_t num_paths, std::size_t num_tx,
                                          AngleUnit unit = AngleUnit::Radians);
}
