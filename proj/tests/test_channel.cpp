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

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace mimocrb;

namespace
{
    constexpr double pi = std::numbers::pi;

    PathParameterSet single_path(cplx gain, double theta, double phi)
    {
        return PathParameterSet(arma::cx_mat(1, 1, arma::fill::value(gain)), arma::mat(1, 1, arma::fill::value(theta)),
                                arma::mat(1, 1, arma::fill::value(phi)));
    }
}

TEST_CASE("steering_phase")
{
    CHECK(steering_phase(pi / 2, 0.0, {0.5, 0.0, 0.0}) == doctest::Approx(0.5).epsilon(1e-15));
    for (double phi : {-1.0, 0.0, 0.3, 2.0})
        CHECK(steering_phase(0.0, phi, {0.7, -1.2, 0.0}) == doctest::Approx(0.0));
    CHECK(steering_phase(pi / 4, pi / 4, {1.0, 1.0, 1.0}) == doctest::Approx(1.7071067811865475).epsilon(1e-14));
}

TEST_CASE("channel_coefficient")
{
    for (double x : {0.0, 0.5, 3.5})
        CHECK(std::abs(channel_coefficient(single_path(1.0, 0.0, 0.3), 0, {x, 0, 0}) - cplx(1.0, 0.0)) < 1e-15);

    CHECK(std::abs(channel_coefficient(single_path(1.0, pi / 2, 0.0), 0, {0.5, 0, 0}) - cplx(-1.0, 0.0)) < 1e-14);

    arma::cx_mat gains(2, 1);
    gains(0, 0) = 1.0;
    gains(1, 0) = -1.0;
    const arma::mat angles(2, 1, arma::fill::value(0.4));
    const PathParameterSet cancel(gains, angles, angles);
    CHECK(std::abs(channel_coefficient(cancel, 0, {0.3, 0.8, 1.1})) < 1e-15);

    CHECK_THROWS_AS(channel_coefficient(cancel, 1, {0, 0, 0}), std::out_of_range);
}

TEST_CASE("PathParameterSet rejects inconsistent shapes")
{
    CHECK_THROWS_AS(PathParameterSet(arma::cx_mat(2, 2), arma::mat(2, 1), arma::mat(2, 2)), ShapeError);
    CHECK_THROWS_AS(PathParameterSet(arma::cx_mat(0, 0), arma::mat(0, 0), arma::mat(0, 0)), ShapeError);
    arma::mat bad(1, 1, arma::fill::value(std::nan("")));
    CHECK_THROWS_AS(PathParameterSet(arma::cx_mat(1, 1, arma::fill::ones), bad, bad), std::invalid_argument);
}

TEST_CASE("assemble_channel")
{
    const auto h1 = assemble_channel(single_path(1.0, 0.0, 0.0), build_ula(1, 0.5));
    REQUIRE(h1.size() == 1);
    CHECK(std::abs(h1[0] - cplx(1.0)) < 1e-15);

    RandomStream rng = derive_stream(11, 0);
    const auto params = draw_path_parameters(rng, 3, 2);
    const auto ula = build_ula(2, 0.5);
    const auto h = assemble_channel(params, ula);
    REQUIRE(h.size() == 4);
    CHECK(h.num_tx == 2);
    CHECK(h.num_rx == 2);
    // stacking order (r0,j0), (r0,j1), (r1,j0), (r1,j1)
    CHECK(h[1] == channel_coefficient(params, 1, ula.element(0)));
    CHECK(h[2] == channel_coefficient(params, 0, ula.element(1)));

    const auto ucya = build_ucya(4, 2, 0.5, 0.5);
    const auto hc = assemble_channel(params, ucya);
    for (std::size_t r = 0; r < ucya.size(); ++r)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(hc(r, j) == channel_coefficient(params, j, ucya.element(r)));
}

TEST_CASE("channel invariants on random draws")
{
    const auto geo = build_ucya(5, 3, 0.5, 0.4);
    for (std::uint64_t seed = 0; seed < 25; ++seed)
    {
        RandomStream rng = derive_stream(seed, 3);
        const auto p = draw_path_parameters(rng, 4, 2);
        const arma::cx_vec h = assemble_channel(p, geo).entries;

        // unit-modulus steering: a single unit-gain path has |h| = 1 everywhere
        const auto unit = PathParameterSet(arma::cx_mat(1, 2, arma::fill::ones), p.zeniths().row(0),
                                           p.azimuths().row(0));
        CHECK(arma::max(arma::abs(arma::abs(assemble_channel(unit, geo).entries) - 1.0)) < 1e-14);

        // path permutation
        const arma::uvec perm = {2, 0, 3, 1};
        const PathParameterSet permuted(p.gains().rows(perm), p.zeniths().rows(perm), p.azimuths().rows(perm));
        CHECK(arma::norm(assemble_channel(permuted, geo).entries - h) <= 1e-13 * arma::norm(h));

        // linear in the gains
        const PathParameterSet doubled(2.0 * p.gains(), p.zeniths(), p.azimuths());
        CHECK(arma::norm(assemble_channel(doubled, geo).entries - 2.0 * h) <= 1e-14 * arma::norm(h));

        // conjugated gains with negated phases conjugate h
        arma::cx_vec hneg(h.n_elem);
        for (std::size_t r = 0; r < geo.size(); ++r)
        {
            const ElementPosition &e = geo.element(r);
            for (std::size_t j = 0; j < 2; ++j)
            {
                cplx sum = 0.0;
                for (std::size_t l = 0; l < 4; ++l)
                    sum += std::conj(p.gains()(l, j)) *
                           std::polar(1.0, 2.0 * pi * steering_phase(p.zeniths()(l, j), p.azimuths()(l, j), e));
                hneg(r * 2 + j) = sum;
            }
        }
        CHECK(arma::norm(hneg - arma::conj(h)) <= 1e-13 * arma::norm(h));
    }
}

TEST_CASE("draw_path_parameters")
{
    RandomStream rng = derive_stream(2024, 0);
    const auto p = draw_path_parameters(rng, 1000, 100);
    CHECK(p.num_paths() == 1000);
    CHECK(p.num_tx() == 100);

    const double mean_power = arma::mean(arma::vectorise(arma::square(arma::abs(p.gains()))));
    CHECK(mean_power == doctest::Approx(1.0).epsilon(0.02));
    CHECK(std::abs(arma::mean(arma::vectorise(p.gains()))) < 0.01);

    for (const arma::mat *m : {&p.zeniths(), &p.azimuths()})
    {
        CHECK(m->min() > -pi / 2);
        CHECK(m->max() < pi / 2);
        CHECK(arma::mean(arma::vectorise(*m)) == doctest::Approx(0.0).epsilon(0.02));
    }

    RandomStream a = derive_stream(7, 3), b = derive_stream(7, 3), c = derive_stream(7, 4);
    const auto pa = draw_path_parameters(a, 4, 2), pb = draw_path_parameters(b, 4, 2), pc = draw_path_parameters(c, 4, 2);
    CHECK(arma::approx_equal(pa.gains(), pb.gains(), "absdiff", 0.0));
    CHECK(arma::approx_equal(pa.zeniths(), pb.zeniths(), "absdiff", 0.0));
    CHECK(arma::approx_equal(pa.azimuths(), pb.azimuths(), "absdiff", 0.0));
    CHECK_FALSE(arma::approx_equal(pa.gains(), pc.gains(), "absdiff", 0.0));

    RandomStream d = derive_stream(5, 0);
    const auto deg = draw_path_parameters(d, 200, 2, AngleUnit::Degrees);
    CHECK(arma::abs(deg.zeniths()).max() < pi / 2 * pi / 180);

    CHECK_THROWS(draw_path_parameters(d, 0, 2));
    CHECK_THROWS(draw_path_parameters(d, 2, 0));
}
