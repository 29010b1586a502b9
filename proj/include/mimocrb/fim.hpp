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
#include "mimocrb/geometry.hpp"
#include "mimocrb/random.hpp"

#include <armadillo>
#include <cstddef>
#include <string_view>
#include <vector>

namespace mimocrb
{
    enum class Parametrization
    {
        UnstructuredH,  // augmented [h; h*]
        StructuredTheta // [beta; beta*; theta; phi]
    };

    enum class InformationSource
    {
        Pilot,
        Data,
        SemiBlind
    };

    // How the gain derivatives and the azimuth derivative are written. `Paper` keeps the
    // 1/2 (1 -/+ i) gain factors and a +cos(theta) z term in the azimuth derivative; `Wirtinger`
    // uses dh/dbeta = steering, dh/dbeta* = 0 and the exact azimuth derivative.
    enum class DerivativeConvention
    {
        Paper,
        Wirtinger
    };

    std::string_view to_string(Parametrization p);
    std::string_view to_string(InformationSource s);
    std::string_view to_string(DerivativeConvention c);

    struct FisherMatrix
    {
        arma::cx_mat matrix;
        Parametrization parametrization = Parametrization::UnstructuredH;
        InformationSource source = InformationSource::Pilot;

        std::size_t dim() const { return matrix.n_rows; }
    };

    struct FisherCheck
    {
        double hermitian_error = 0.0; // ||J - J^H||_F / ||J||_F
        double min_eigenvalue = 0.0;
        double max_eigenvalue = 0.0;
        bool hermitian = false;
        bool psd = false;
    };

    // Hermitian within `tolerance` relative, smallest eigenvalue >= -tolerance * largest
    FisherCheck check_fisher(const arma::cx_mat &matrix, double tolerance = 1e-10);
    inline FisherCheck check_fisher(const FisherMatrix &fim, double tolerance = 1e-10)
    {
        return check_fisher(fim.matrix, tolerance);
    }

    /*!
     * Training layout and power levels for one frame.
     *
     * Each of the num_pilots blocks is a num_subcarriers x num_tx matrix of unit-modulus symbols;
     * column j is what transmit antenna j sends on the K subcarriers of that pilot OFDM symbol.
     */
    class PilotConfig
    {
    public:
        PilotConfig(std::vector<arma::cx_mat> blocks, double noise_variance, arma::vec signal_variance);

        // Block i, column j carries exp(2 pi i k j / K): columns are mutually orthogonal when num_tx <= K
        static PilotConfig orthogonal(std::size_t num_subcarriers, std::size_t num_pilots, std::size_t num_tx,
                                      double noise_variance, arma::vec signal_variance);

        // Independent QPSK symbols (+-1 +-i)/sqrt(2)
        static PilotConfig random_qpsk(RandomStream &rng, std::size_t num_subcarriers, std::size_t num_pilots,
                                       std::size_t num_tx, double noise_variance, arma::vec signal_variance);

        const std::vector<arma::cx_mat> &blocks() const { return blocks_; }
        std::size_t num_pilots() const { return blocks_.size(); }
        std::size_t num_subcarriers() const { return blocks_.front().n_rows; }
        std::size_t num_tx() const { return blocks_.front().n_cols; }
        double noise_variance() const { return noise_variance_; }
        const arma::vec &signal_variance() const { return signal_variance_; }

        // sum_i X(i)^H X(i)
        arma::cx_mat gram() const;

    private:
        std::vector<arma::cx_mat> blocks_;
        double noise_variance_;
        arma::vec signal_variance_;
    };

    /*!
     * dh/dTheta, num_tx * num_rx rows by 4 * num_tx * num_paths columns.
     *
     * Column blocks are [beta | beta* | theta | phi]; within a block, column j * num_paths + l belongs
     * to path l of transmit antenna j. Row r * num_tx + j is nonzero only in antenna j's columns.
     */
    struct JacobianMatrix
    {
        enum Block : std::size_t
        {
            Gain = 0,
            ConjGain = 1,
            Zenith = 2,
            Azimuth = 3
        };

        arma::cx_mat matrix;
        std::size_t num_tx = 0;
        std::size_t num_rx = 0;
        std::size_t num_paths = 0;
        DerivativeConvention convention = DerivativeConvention::Paper;

        std::size_t column(Block block, std::size_t tx, std::size_t path) const
        {
            return std::size_t(block) * num_tx * num_paths + tx * num_paths + path;
        }
    };

    /*!
     * Jacobian of the augmented vector [h; h*]. The lower half uses d(h*)/d(beta) = conj(dh/d(beta*)),
     * d(h*)/d(beta*) = conj(dh/d(beta)) and the conjugates of the real-angle columns.
     */
    arma::cx_mat augmented_jacobian(const JacobianMatrix &jacobian);

    // Pilot-only information on [h; h*]: block diagonal over receive antennas, X^H X / noise per block
    FisherMatrix pilot_fim_unstructured(const PilotConfig &pilots, std::size_t num_rx);

    /*!
     * Information on [h; h*] carried by num_data unknown Gaussian data symbols.
     *
     * The received covariance of one OFDM symbol is C = R (x) I_K with R = H diag(sigma_x^2) H^H +
     * sigma_v^2 I, so every trace over the K * num_rx space collapses to K times a trace over the
     * num_rx space. Throws SingularCovariance when R cannot be inverted.
     */
    FisherMatrix data_fim_unstructured(const ChannelVector &h, const PilotConfig &pilots, std::size_t num_data,
                                       std::size_t num_rx);

    FisherMatrix semi_blind_fim(const FisherMatrix &pilot_fim, const FisherMatrix &data_fim);

    JacobianMatrix channel_jacobian(const PathParameterSet &params, const ArrayGeometry &geometry,
                                    DerivativeConvention convention = DerivativeConvention::Paper);

    // G^H J G for an arbitrary Jacobian G with as many rows as J; the result is tagged StructuredTheta
    FisherMatrix reparametrize_fim(const FisherMatrix &fim, const arma::cx_mat &jacobian);

    // Chain rule G^H J G with G the augmented Jacobian
    FisherMatrix structured_fim(const FisherMatrix &unstructured_fim, const JacobianMatrix &jacobian);
}
