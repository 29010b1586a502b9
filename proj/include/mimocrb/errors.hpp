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

#include <stdexcept>
#include <string>

namespace mimocrb
{
    // Array construction with unusable counts or spacings
    class InvalidGeometry : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Operands whose dimensions or tags do not conform
    class ShapeError : public std::invalid_argument
    {
    public:
        using std::invalid_argument::invalid_argument;
    };

    // Received-signal covariance could not be inverted
    class SingularCovariance : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    // Fisher matrix carries no information, so no finite bound exists
    class DegenerateInformation : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };
}
