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

#include "mimocrb/geometry.hpp"
#include "mimocrb/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace mimocrb
{
    namespace
    {
        void check_spacing(double spacing, const char *name)
        {
            if (!std::isfinite(spacing) || spacing <= 0.0)
                throw InvalidGeometry(std::string(name) + " must be a positive finite length");
        }
    }

    std::string_view to_string(ArrayKind kind)
    {
        switch (kind)
        {
        case ArrayKind::ULA:
            return "ULA";
        case ArrayKind::UCA:
            return "UCA";
        case ArrayKind::UCyA:
            return "UCyA";
        }
        return "?";
    }

    double uca_radius(std::size_t ring_size, double spacing_2d)
    {
        if (ring_size < 2)
            throw InvalidGeometry("ring_size must be at least 2");
        check_spacing(spacing_2d, "spacing_2d");
        return 0.5 * spacing_2d / std::sin(std::numbers::pi / double(ring_size));
    }

    ArrayGeometry build_ula(std::size_t n, double spacing_2d)
    {
        if (n == 0)
            throw InvalidGeometry("ULA needs at least one element");
        check_spacing(spacing_2d, "spacing_2d");

        ArrayGeometry geo;
        geo.kind_ = ArrayKind::ULA;
        geo.spacing_2d_ = spacing_2d;
        geo.elements_.reserve(n);
        for (std::size_t p = 0; p < n; ++p)
            geo.elements_.push_back({double(p) * spacing_2d, 0.0, 0.0});
        return geo;
    }

    ArrayGeometry build_ucya(std::size_t ring_size, std::size_t layer_count, double spacing_2d, double spacing_3d)
    {
        if (layer_count == 0)
            throw InvalidGeometry("UCyA needs at least one layer");
        const double radius = uca_radius(ring_size, spacing_2d);
        check_spacing(spacing_3d, "spacing_3d");

        ArrayGeometry geo;
        geo.kind_ = ArrayKind::UCyA;
        geo.spacing_2d_ = spacing_2d;
        geo.spacing_3d_ = spacing_3d;
        geo.ring_size_ = ring_size;
        geo.layer_count_ = layer_count;
        geo.elements_.reserve(ring_size * layer_count);

        const double step = 2.0 * std::numbers::pi / double(ring_size);
        for (std::size_t layer = 0; layer < layer_count; ++layer)
            for (std::size_t n = 0; n < ring_size; ++n)
            {
                // x through sin and y through cos, so element 0 lies on the +y axis
                const double angle = double(n) * step;
                geo.elements_.push_back({radius * std::sin(angle), radius * std::cos(angle), double(layer) * spacing_3d});
            }
        return geo;
    }

    ArrayGeometry build_uca(std::size_t ring_size, double spacing_2d)
    {
        // spacing_3d is irrelevant for one layer; any positive value will do
        ArrayGeometry geo = build_ucya(ring_size, 1, spacing_2d, 1.0);
        geo.kind_ = ArrayKind::UCA;
        geo.spacing_3d_ = 0.0;
        return geo;
    }
}
