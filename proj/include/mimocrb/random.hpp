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

#include <cstdint>
#include <random>

namespace mimocrb
{
    using RandomStream = std::mt19937_64;

    // Independent stream for (master_seed, index, purpose). The same triple always yields the same
    // sequence, whatever order or thread the stream is created on.
    inline RandomStream derive_stream(std::uint64_t master_seed, std::uint64_t index, std::uint64_t purpose = 0)
    {
        std::seed_seq seq{std::uint32_t(master_seed), std::uint32_t(master_seed >> 32),
                          std::uint32_t(index), std::uint32_t(index >> 32),
                          std::uint32_t(purpose), std::uint32_t(purpose >> 32)};
        return RandomStream(seq);
    }
}
