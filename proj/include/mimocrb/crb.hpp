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

#include "mimocrb/fim.hpp"

#include <armadillo>
#include <cstddef>

namespace mimocrb
{
    // What the rows and columns of a CrbMatrix index
    enum class CrbSpace
    {
        AugmentedH, // [h; h*], 2 * num_tx * num_rx
        ChannelH,   // h, num_tx * num_rx
        Theta       // structured parameters, 4 * num_tx * num_paths
    };

    enum class CrbReduction
    {
        NormalizedTrace, // tr(CRB_hh) / (num_tx * num_rx)
        SumTrace         // tr(CRB_hh)
    };

    struct CrbMatrix
    {
        arma::cx_mat matrix;
        Parametrization parametrization = Parametrization::UnstructuredH;
        CrbSpace space = CrbSpace::AugmentedH;
        std::size_t rank_used = 0;
        double tolerance_used = 0.0;

        std::size_t dim() const { return matrix.n_rows; }
        bool rank_deficient(std::size_t information_dim) const { return rank_used < information_dim; }
    };

    inline constexpr double default_pinv_tolerance = 1e-10;

    /*!
     * Eigendecomposition pseudo-inverse. Eigenvalues at or below tolerance * (largest eigenvalue) are
     * dropped and the bound covers the remaining subspace; rank_used counts what is kept. Throws
     * DegenerateInformation when the matrix has no positive eigenvalue.
     */
    CrbMatrix invert_fim(const FisherMatrix &fim, double tolerance = default_pinv_tolerance);

    /*!
     * Bound on h implied by the structured model: G (J_theta)^+ G^H, where G = dh/dTheta is the
     * upper (h) half of the augmented Jacobian. A Jacobian that is identically zero gives a zero
     * matrix with rank_used = 0.
     */
    CrbMatrix structured_crb_on_h(const FisherMatrix &structured_fim, const JacobianMatrix &jacobian,
                                  double tolerance = default_pinv_tolerance);

    // Same as above for an arbitrary dh/dTheta with structured_fim.dim() columns
    CrbMatrix structured_crb_on_h(const FisherMatrix &structured_fim, const arma::cx_mat &jacobian,
                                  double tolerance = default_pinv_tolerance);

    // Scalar bound reported in sweeps. For AugmentedH only the (h, h) block enters.
    double crb_scalar(const CrbMatrix &crb, CrbReduction reduction = CrbReduction::NormalizedTrace);
}
