/*
 * Copyright 2026 The usid authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cmath>
#include <cstdint>

namespace usid {

namespace detail {

/// splitmix64 output function (Stafford Mix13); bijective 64-bit mixer.
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

}  // namespace detail

/// Counter-based random stream: the state is derived from (seed, stream index),
/// so stream k of a seed is reproducible in isolation, independent of how work
/// is partitioned across workers.
class StreamRng {
public:
    StreamRng(std::uint64_t seed, std::uint64_t stream)
        : state_(detail::mix64(detail::mix64(seed) ^
                               detail::mix64(stream * 0xD1342543DE82EF95ULL + 1))) {}

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    /// Uniform on (0, 1); never returns an endpoint.
    double next_uniform() {
        return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    /// Two independent standard normals (Box-Muller).
    void next_gaussian_pair(double& g1, double& g2) {
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double phi = 2.0 * M_PI * u2;
        g1 = r * std::cos(phi);
        g2 = r * std::sin(phi);
    }

private:
    std::uint64_t state_;
};

}  // namespace usid
