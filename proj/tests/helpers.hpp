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
#include <string>
#include <vector>

#include "emofuse/random.hpp"
#include "emofuse/skeleton.hpp"

// Shared test utilities: fixture paths, synthetic stream builders, and a
// small symmetric eigensolver kept independent of the library so it can act
// as an oracle for kernel matrix checks.

namespace testutil {

inline std::string data_dir() { return EMOFUSE_DATA_DIR; }
inline std::string fixture(const std::string& name) { return data_dir() + "/fixtures/" + name; }
inline std::string paper_table(const std::string& name) {
    return data_dir() + "/paper_tables/" + name;
}
inline std::string mapping_file(const std::string& name) {
    return data_dir() + "/mappings/" + name;
}

/// Builds a stream where a generator supplies each point position per frame.
template <typename Gen>
emofuse::SkeletonStream make_stream(const emofuse::ModalityLayout& layout, std::size_t frames,
                                    double rate, Gen&& position) {
    emofuse::SkeletonStream s;
    s.layout = layout;
    s.frame_rate_hz = rate;
    s.frames.reserve(frames);
    for (std::size_t f = 0; f < frames; ++f) {
        emofuse::SkeletonFrame frame;
        frame.frame_index = f;
        frame.timestamp = static_cast<double>(f) / rate;
        for (std::size_t p = 0; p < layout.expected_count(); ++p)
            frame.coords.push_back(position(f, p));
        s.frames.push_back(std::move(frame));
    }
    return s;
}

/// All eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
/// Independent of the library under test.
inline std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
        if (off < 1e-24) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-18) continue;
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<double> eig(n);
    for (std::size_t i = 0; i < n; ++i) eig[i] = a[i][i];
    return eig;
}

} // namespace testutil
