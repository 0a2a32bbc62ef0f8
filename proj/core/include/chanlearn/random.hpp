// SPDX-License-Identifier: Apache-2.0
//
// chanlearn: channel learning simulation suite
// Copyright (C) 2026 The chanlearn authors
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

#ifndef CHANLEARN_RANDOM_HPP
#define CHANLEARN_RANDOM_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>

namespace chanlearn {

// Independent sub-streams of a run seed. Values are part of the reproducibility
// contract: changing them changes every generated dataset.
enum class Stream : std::uint64_t {
    scatterers = 0x5ca7,
    reflection = 0x9e11,
    users = 0x05e2,
    split = 0x5b17,
    nn_channel = 0xc4a1,
    nn_location = 0x10ca,
    random_selection = 0x2a5d,
    distance_study = 0xd157,
};

// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

// Deterministic seed derived from a parent seed and a key.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t key);
inline std::uint64_t derive_seed(std::uint64_t parent, Stream stream)
{
    return derive_seed(parent, static_cast<std::uint64_t>(stream));
}

// Portable sampler over mt19937_64. The standard distributions are
// implementation-defined, so uniform/normal/index draws are done here to keep
// outputs identical across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform on [0, 1) with 53 random bits.
    double uniform();
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    double normal();
    // Uniform integer in [0, n); n must be positive.
    std::size_t index(std::size_t n);

    template <typename T>
    void shuffle(std::span<T> items)
    {
        for (std::size_t i = items.size(); i > 1; --i) {
            const std::size_t j = index(i);
            std::swap(items[i - 1], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_normal_;
};

} // namespace chanlearn

#endif
