/*
 * Copyright 2026 the emofuse authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *    http://www.apache.org/licenses/LICENSE-2.0
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
#include <random>
#include <vector>

// Seeded randomness helpers. The engine is std::mt19937_64 (bit-identical on
// every platform); the draw helpers below are spelled out explicitly because
// the standard <random> distributions are implementation-defined and would
// break byte-reproducible outputs across standard libraries.

namespace emofuse::rng {

using Engine = std::mt19937_64;

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// Uniform integer in [0, n). n must be > 0.
inline std::size_t uniform_index(Engine& eng, std::size_t n) {
    // Rejection sampling to avoid modulo bias.
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do {
        v = eng();
    } while (v >= limit);
    return static_cast<std::size_t>(v % n);
}

/// Uniform real in [0, 1).
inline double uniform_real(Engine& eng) {
    return (eng() >> 11) * 0x1.0p-53;
}

/// Uniform real in [lo, hi).
inline double uniform_real(Engine& eng, double lo, double hi) {
    return lo + (hi - lo) * uniform_real(eng);
}

/// Standard normal via Box-Muller.
inline double gaussian(Engine& eng) {
    double u1 = uniform_real(eng);
    double u2 = uniform_real(eng);
    if (u1 < 1e-300) u1 = 1e-300;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Fisher-Yates shuffle with explicit draws.
template <typename T>
void shuffle(std::vector<T>& v, Engine& eng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        std::size_t j = uniform_index(eng, i);
        std::swap(v[i - 1], v[j]);
    }
}

} // namespace emofuse::rng
