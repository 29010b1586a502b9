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

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace mimocrb
{
    // Element position in units of the carrier wavelength.
    struct ElementPosition
    {
        double x = 0.0;
        double y = 0.0;
        double z = 0.0;

        bool operator==(const ElementPosition &) const = default;
    };

    enum class ArrayKind
    {
        ULA,
        UCA,
        UCyA
    };

    std::string_view to_string(ArrayKind kind);

    /*!
     * Receive array layout. Instances are built through build_ula, build_uca or build_ucya and are
     * immutable afterwards.
     *
     * UCyA elements are stored layer-major: ring indices 0..ring_size-1 of layer 0, then layer 1, and
     * so on. The first ring element sits at (0, R, z) with no recentering.
     */
    class ArrayGeometry
    {
    public:
        ArrayKind kind() const { return kind_; }
        std::span<const ElementPosition> elements() const { return elements_; }
        const ElementPosition &element(std::size_t index) const { return elements_.at(index); }
        std::size_t size() const { return elements_.size(); }

        double spacing_2d() const { return spacing_2d_; }
        double spacing_3d() const { return spacing_3d_; } // 0 for ULA and UCA
        std::size_t ring_size() const { return ring_size_; } // 0 for ULA
        std::size_t layer_count() const { return layer_count_; } // 1 for ULA and UCA

    private:
        friend ArrayGeometry build_ula(std::size_t, double);
        friend ArrayGeometry build_ucya(std::size_t, std::size_t, double, double);
        friend ArrayGeometry build_uca(std::size_t, double);

        ArrayGeometry() = default;

        ArrayKind kind_ = ArrayKind::ULA;
        std::vector<ElementPosition> elements_;
        double spacing_2d_ = 0.0;
        double spacing_3d_ = 0.0;
        std::size_t ring_size_ = 0;
        std::size_t layer_count_ = 1;
    };

    // Radius of a ring of `ring_size` elements whose neighbours are `spacing_2d` apart
    double uca_radius(std::size_t ring_size, double spacing_2d);

    // Elements at (p * spacing_2d, 0, 0), p = 0..n-1
    ArrayGeometry build_ula(std::size_t n, double spacing_2d);

    // Stack of `layer_count` identical rings separated by `spacing_3d` along z
    ArrayGeometry build_ucya(std::size_t ring_size, std::size_t layer_count, double spacing_2d, double spacing_3d);

    // Single ring in the z = 0 plane
    ArrayGeometry build_uca(std::size_t ring_size, double spacing_2d);
}
