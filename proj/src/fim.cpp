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

#include "mimocrb/fim.hpp"
#include "mimocrb/errors.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace mimocrb
{
    namespace
    {
        arma::cx_mat hermitian_part(const arma::cx_mat &m)
        {
            return 0.5 * (m + m.t());
        }

        // num_rx x num_tx channel matrix, H(r, j) = h_{r,j}
        arma::cx_mat channel_matrix(const ChannelVector &h)
        {
            arma::cx_mat H(h.num_rx, h.num_tx);
            for (std::size_t r = 0; r < h.num_rx; ++r)
                for (std::size_t j = 0; j < h.num_tx; ++j)
                    H(r, j) = h(r, j);
            return H;
        }
    }

    std::string_view to_string(Parametrization p)
    {
        return p == Parametrization::UnstructuredH ? "unstructured" : "structured";
    }

    std::string_view to_string(InformationSource s)
    {
        switch (s)
        {
        case InformationSource::Pilot:
            return "pilot";
        case InformationSource::Data:
            return "data";
        case InformationSource::SemiBlind:
            return "semi-blind";
        }
        return "?";
    }

    std::string_view to_string(DerivativeConvention c)
    {
        return c == DerivativeConvention::Paper ? "paper" : "wirtinger";
    }

    FisherCheck check_fisher(const arma::cx_mat &matrix, double tolerance)
    {
        FisherCheck check;
        if (matrix.n_rows != matrix.n_cols)
            return check;
        if (matrix.n_elem == 0)
        {
            check.hermitian = check.psd = true;
            return check;
        }

        const double norm = arma::norm(matrix, "fro");
        check.hermitian_error = norm > 0.0 ? arma::norm(matrix - matrix.t(), "fro") / norm : 0.0;
        check.hermitian = check.hermitian_error <= tolerance;

        const arma::vec eigval = arma::eig_sym(hermitian_part(matrix));
        check.min_eigenvalue = eigval.front();
        check.max_eigenvalue = eigval.back();
        check.psd = check.min_eigenvalue >= -tolerance * std::max(check.max_eigenvalue, 0.0);
        return check;
    }

    PilotConfig::PilotConfig(std::vector<arma::cx_mat> blocks, double noise_variance, arma::vec signal_variance)
        : blocks_(std::move(blocks)), noise_variance_(noise_variance), signal_variance_(std::move(signal_variance))
    {
        if (blocks_.empty())
            throw std::invalid_argument("at least one pilot block is required");
        const auto rows = blocks_.front().n_rows, cols = blocks_.front().n_cols;
        if (rows == 0 || cols == 0)
            throw ShapeError("pilot blocks must be non-empty");
        for (const auto &b : blocks_)
        {
            if (b.n_rows != rows || b.n_cols != cols)
                throw ShapeError("all pilot blocks must share one shape");
            if (arma::any(arma::abs(arma::abs(arma::vectorise(b)) - 1.0) > 1e-12))
                throw std::invalid_argument("pilot symbols must have unit modulus");
        }
        if (!(noise_variance_ > 0.0) || !std::isfinite(noise_variance_))
            throw std::invalid_argument("noise variance must be positive and finite");
        if (signal_variance_.n_elem != cols)
            throw ShapeError("signal variance needs one entry per transmit antenna");
        if (!signal_variance_.is_finite() || arma::any(signal_variance_ < 0.0))
            throw std::invalid_argument("signal variances must be non-negative and finite");
    }

    PilotConfig PilotConfig::orthogonal(std::size_t num_subcarriers, std::size_t num_pilots, std::size_t num_tx,
                                        double noise_variance, arma::vec signal_variance)
    {
        if (num_tx > num_subcarriers)
            throw ShapeError("orthogonal pilots need num_tx <= num_subcarriers");
        arma::cx_mat block(num_subcarriers, num_tx);
        for (std::size_t k = 0; k < num_subcarriers; ++k)
            for (std::size_t j = 0; j < num_tx; ++j)
            {
                // reduce k*j mod K first so the phase stays exact for large products
                const double turns = double((k * j) % num_subcarriers) / double(num_subcarriers);
                block(k, j) = std::polar(1.0, 2.0 * std::numbers::pi * turns);
            }
        return PilotConfig(std::vector<arma::cx_mat>(num_pilots, block), noise_variance, std::move(signal_variance));
    }

    PilotConfig PilotConfig::random_qpsk(RandomStream &rng, std::size_t num_subcarriers, std::size_t num_pilots,
                                         std::size_t num_tx, double noise_variance, arma::vec signal_variance)
    {
        const double a = 1.0 / std::sqrt(2.0);
        std::bernoulli_distribution coin(0.5);
        std::vector<arma::cx_mat> blocks(num_pilots, arma::cx_mat(num_subcarriers, num_tx));
        for (auto &b : blocks)
            for (std::size_t j = 0; j < num_tx; ++j)
                for (std::size_t k = 0; k < num_subcarriers; ++k)
                {
                    const double re = coin(rng) ? a : -a;
                    const double im = coin(rng) ? a : -a;
                    b(k, j) = {re, im};
                }
        return PilotConfig(std::move(blocks), noise_variance, std::move(signal_variance));
    }

    arma::cx_mat PilotConfig::gram() const
    {
        arma::cx_mat g(num_tx(), num_tx(), arma::fill::zeros);
        for (const auto &b : blocks_)
            g += b.t() * b;
        return g;
    }

    arma::cx_mat augmented_jacobian(const JacobianMatrix &jacobian)
    {
        const arma::cx_mat &G = jacobian.matrix;
        const std::size_t block = jacobian.num_tx * jacobian.num_paths;

        arma::cx_mat lower = arma::conj(G);
        lower.cols(0, block - 1) = arma::conj(G.cols(block, 2 * block - 1));
        lower.cols(block, 2 * block - 1) = arma::conj(G.cols(0, block - 1));
        return arma::join_cols(G, lower);
    }

    FisherMatrix pilot_fim_unstructured(const PilotConfig &pilots, std::size_t num_rx)
    {
        if (num_rx == 0)
            throw ShapeError("num_rx must be positive");

        const arma::cx_mat per_rx = pilots.gram() / pilots.noise_variance();
        const arma::cx_mat A = arma::kron(arma::eye<arma::cx_mat>(num_rx, num_rx), per_rx);
        const std::size_t n = A.n_rows;

        arma::cx_mat J(2 * n, 2 * n, arma::fill::zeros);
        J.submat(0, 0, n - 1, n - 1) = A;
        J.submat(n, n, 2 * n - 1, 2 * n - 1) = arma::conj(A);
        return {hermitian_part(J), Parametrization::UnstructuredH, InformationSource::Pilot};
    }

    FisherMatrix data_fim_unstructured(const ChannelVector &h, const PilotConfig &pilots, std::size_t num_data,
                                       std::size_t num_rx)
    {
        if (h.num_rx != num_rx || h.num_tx != pilots.num_tx() || h.size() != h.num_tx * h.num_rx)
            throw ShapeError("channel vector does not match num_rx x num_tx");

        const std::size_t n_tx = h.num_tx, n_rx = h.num_rx, n = n_tx * n_rx;
        FisherMatrix out{arma::cx_mat(2 * n, 2 * n, arma::fill::zeros), Parametrization::UnstructuredH,
                         InformationSource::Data};
        if (num_data == 0)
            return out;

        const arma::cx_mat H = channel_matrix(h);
        const arma::vec &s = pilots.signal_variance();
        const arma::cx_mat R = H * arma::diagmat(arma::conv_to<arma::cx_vec>::from(s)) * H.t() +
                               pilots.noise_variance() * arma::eye<arma::cx_mat>(n_rx, n_rx);

        arma::cx_mat W;
        if (arma::rcond(R) < 1e-14 || !arma::inv(W, R))
            throw SingularCovariance("received-signal covariance is singular");

        const arma::cx_mat WH = W * H;
        const arma::cx_mat Gm = H.t() * WH;
        const double scale = double(pilots.num_subcarriers()) * double(num_data);

        // m = (r, j), m' = (r', j'):
        //   A(m, m') = s_j s_j' W(r, r') G(j', j)
        //   B(m, m') = s_j s_j' WH(r', j) WH(r, j')
        arma::cx_mat A(n, n), B(n, n);
        for (std::size_t r = 0; r < n_rx; ++r)
            for (std::size_t j = 0; j < n_tx; ++j)
                for (std::size_t rp = 0; rp < n_rx; ++rp)
                    for (std::size_t jp = 0; jp < n_tx; ++jp)
                    {
                        const double ss = scale * s(j) * s(jp);
                        A(r * n_tx + j, rp * n_tx + jp) = ss * W(r, rp) * Gm(jp, j);
                        B(r * n_tx + j, rp * n_tx + jp) = ss * WH(rp, j) * WH(r, jp);
                    }

        out.matrix.submat(0, 0, n - 1, n - 1) = A;
        out.matrix.submat(0, n, n - 1, 2 * n - 1) = B;
        out.matrix.submat(n, 0, 2 * n - 1, n - 1) = arma::conj(B);
        out.matrix.submat(n, n, 2 * n - 1, 2 * n - 1) = arma::conj(A);
        out.matrix = hermitian_part(out.matrix);
        return out;
    }

    FisherMatrix semi_blind_fim(const FisherMatrix &pilot_fim, const FisherMatrix &data_fim)
    {
        if (pilot_fim.source != InformationSource::Pilot || data_fim.source != InformationSource::Data)
            throw ShapeError("semi-blind information needs one pilot and one data FIM");
        if (pilot_fim.parametrization != data_fim.parametrization || pilot_fim.dim() != data_fim.dim())
            throw ShapeError("pilot and data FIMs differ in parametrization or dimension");
        return {pilot_fim.matrix + data_fim.matrix, pilot_fim.parametrization, InformationSource::SemiBlind};
    }

    JacobianMatrix channel_jacobian(const PathParameterSet &params, const ArrayGeometry &geometry,
                                    DerivativeConvention convention)
    {
        const std::size_t n_tx = params.num_tx(), n_paths = params.num_paths(), n_rx = geometry.size();
        JacobianMatrix jac{arma::cx_mat(n_tx * n_rx, 4 * n_tx * n_paths, arma::fill::zeros), n_tx, n_rx, n_paths,
                           convention};

        const bool paper = convention == DerivativeConvention::Paper;
        const cplx gain_factor = paper ? cplx(0.5, -0.5) : cplx(1.0, 0.0);
        const cplx conj_gain_factor = paper ? cplx(0.5, 0.5) : cplx(0.0, 0.0);
        const double kc = 2.0 * std::numbers::pi;
        const cplx minus_i_kc(0.0, -kc);

        for (std::size_t r = 0; r < n_rx; ++r)
        {
            const ElementPosition &p = geometry.element(r);
            for (std::size_t j = 0; j < n_tx; ++j)
            {
                const std::size_t row = r * n_tx + j;
                for (std::size_t l = 0; l < n_paths; ++l)
                {
                    const double theta = params.zeniths()(l, j), phi = params.azimuths()(l, j);
                    const cplx beta = params.gains()(l, j);
                    const cplx steer = std::polar(1.0, -kc * steering_phase(theta, phi, p));

                    const double st = std::sin(theta), ct = std::cos(theta);
                    const double sp = std::sin(phi), cp = std::cos(phi);
                    const double ds_dtheta = ct * cp * p.x + ct * sp * p.y - st * p.z;
                    double ds_dphi = -st * sp * p.x + st * cp * p.y;
                    if (paper)
                        ds_dphi += ct * p.z;

                    jac.matrix(row, jac.column(JacobianMatrix::Gain, j, l)) = gain_factor * steer;
                    jac.matrix(row, jac.column(JacobianMatrix::ConjGain, j, l)) = conj_gain_factor * steer;
                    jac.matrix(row, jac.column(JacobianMatrix::Zenith, j, l)) = beta * minus_i_kc * ds_dtheta * steer;
                    jac.matrix(row, jac.column(JacobianMatrix::Azimuth, j, l)) = beta * minus_i_kc * ds_dphi * steer;
                }
            }
        }
        return jac;
    }

    FisherMatrix reparametrize_fim(const FisherMatrix &fim, const arma::cx_mat &jacobian)
    {
        if (jacobian.n_rows != fim.dim())
            throw ShapeError("Jacobian rows " + std::to_string(jacobian.n_rows) + " do not match FIM dimension " +
                             std::to_string(fim.dim()));
        return {hermitian_part(jacobian.t() * fim.matrix * jacobian), Parametrization::StructuredTheta, fim.source};
    }

    FisherMatrix structured_fim(const FisherMatrix &unstructured_fim, const JacobianMatrix &jacobian)
    {
        if (unstructured_fim.parametrization != Parametrization::UnstructuredH)
            throw ShapeError("structured_fim expects an unstructured (augmented h) FIM");
        if (unstructured_fim.dim() != 2 * jacobian.matrix.n_rows)
            throw ShapeError("FIM dimension " + std::to_string(unstructured_fim.dim()) +
                             " does not match augmented Jacobian rows " + std::to_string(2 * jacobian.matrix.n_rows));

        return reparametrize_fim(unstructured_fim, augmented_jacobian(jacobian));
    }
}
