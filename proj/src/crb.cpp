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

#include "mimocrb/crb.hpp"
#include "mimocrb/errors.hpp"

#include <algorithm>
#include <string>

namespace mimocrb
{
    CrbMatrix invert_fim(const FisherMatrix &fim, double tolerance)
    {
        if (fim.dim() == 0 || fim.matrix.n_cols != fim.dim())
            throw ShapeError("FIM must be square and non-empty");
        if (tolerance < 0.0)
            throw std::invalid_argument("pseudo-inverse tolerance must be non-negative");

        arma::vec eigval;
        arma::cx_mat eigvec;
        if (!arma::eig_sym(eigval, eigvec, arma::cx_mat(0.5 * (fim.matrix + fim.matrix.t()))))
            throw std::runtime_error("eigendecomposition of FIM failed");

        const double largest = eigval.max();
        if (!(largest > 0.0))
            throw DegenerateInformation("FIM has no positive eigenvalue");

        const double cutoff = tolerance * largest;
        const arma::uvec keep = arma::find(eigval > cutoff);
        const arma::cx_mat V = eigvec.cols(keep);
        const arma::vec inv = 1.0 / eigval.elem(keep);

        CrbMatrix crb;
        crb.matrix = V * arma::diagmat(arma::conv_to<arma::cx_vec>::from(inv)) * V.t();
        crb.matrix = 0.5 * (crb.matrix + crb.matrix.t());
        crb.parametrization = fim.parametrization;
        crb.space = fim.parametrization == Parametrization::UnstructuredH ? CrbSpace::AugmentedH : CrbSpace::Theta;
        crb.rank_used = keep.n_elem;
        crb.tolerance_used = tolerance;
        return crb;
    }

    CrbMatrix structured_crb_on_h(const FisherMatrix &structured_fim, const arma::cx_mat &jacobian, double tolerance)
    {
        if (structured_fim.parametrization != Parametrization::StructuredTheta)
            throw ShapeError("structured_crb_on_h expects a StructuredTheta FIM");
        if (jacobian.n_cols != structured_fim.dim())
            throw ShapeError("Jacobian columns " + std::to_string(jacobian.n_cols) + " do not match FIM dimension " +
                             std::to_string(structured_fim.dim()));

        if (!arma::any(arma::vectorise(jacobian) != cplx(0.0)))
            return {arma::cx_mat(jacobian.n_rows, jacobian.n_rows, arma::fill::zeros), Parametrization::StructuredTheta,
                    CrbSpace::ChannelH, 0, tolerance};

        const CrbMatrix theta = invert_fim(structured_fim, tolerance);
        CrbMatrix out;
        out.matrix = jacobian * theta.matrix * jacobian.t();
        out.matrix = 0.5 * (out.matrix + out.matrix.t());
        out.parametrization = Parametrization::StructuredTheta;
        out.space = CrbSpace::ChannelH;
        out.rank_used = theta.rank_used;
        out.tolerance_used = tolerance;
        return out;
    }

    CrbMatrix structured_crb_on_h(const FisherMatrix &structured_fim, const JacobianMatrix &jacobian, double tolerance)
    {
        return structured_crb_on_h(structured_fim, jacobian.matrix, tolerance);
    }

    double crb_scalar(const CrbMatrix &crb, CrbReduction reduction)
    {
        std::size_t n = crb.dim();
        if (crb.space == CrbSpace::AugmentedH)
            n /= 2;
        if (n == 0)
            return 0.0;

        const double trace = std::real(arma::trace(crb.matrix.submat(0, 0, n - 1, n - 1)));
        const double value = reduction == CrbReduction::SumTrace ? trace : trace / double(n);
        return std::max(value, 0.0);
    }
}
