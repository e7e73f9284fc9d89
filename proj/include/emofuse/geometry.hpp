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

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <vector>

#include "emofuse/errors.hpp"

namespace emofuse {

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    bool operator==(const Vec3&) const = default;

    double norm() const { return std::sqrt(x * x + y * y + z * z); }
    bool finite() const {
        return std::isfinite(x) && std::isfinite(y) && std::isfinite(z);
    }
};

inline double dot(const Vec3& a, const Vec3& b) {
    return a.x * b.x + a.y * b.y + a.z * b.z;
}

inline constexpr double kRadToDeg = 180.0 / M_PI;

/// Euclidean distance in meters. Symmetric, non-negative.
inline double pair_distance(const Vec3& a, const Vec3& b) {
    if (!a.finite() || !b.finite())
        throw ValidationError("pair_distance: non-finite input");
    return (b - a).norm();
}

/// Angle in degrees plus a flag for geometrically undefined cases, where the
/// angle is reported as 0.
struct AngleResult {
    double degrees = 0.0;
    bool degenerate = false;
};

/// Angle of segment a->b against the horizontal axis, measured in the frontal
/// x-y projection (z ignored). Degrees in (-180, 180]. Coincident projections
/// yield {0, degenerate}.
inline AngleResult pair_angle(const Vec3& a, const Vec3& b) {
    if (!a.finite() || !b.finite())
        throw ValidationError("pair_angle: non-finite input");
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    if (dx == 0.0 && dy == 0.0) return {0.0, true};
    return {std::atan2(dy, dx) * kRadToDeg, false};
}

/// Interior angle at vertex b of the chain a-b-c, in degrees [0, 180].
/// Computed in full 3D. A zero-length limb yields {0, degenerate}.
inline AngleResult interior_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
    if (!a.finite() || !b.finite() || !c.finite())
        throw ValidationError("interior_angle: non-finite input");
    const Vec3 u = a - b;
    const Vec3 v = c - b;
    const double nu = u.norm();
    const double nv = v.norm();
    if (nu == 0.0 || nv == 0.0) return {0.0, true};
    double cosang = dot(u, v) / (nu * nv);
    cosang = std::clamp(cosang, -1.0, 1.0);
    return {std::acos(cosang) * kRadToDeg, false};
}

struct VelocityResult {
    double speed = 0.0;  // mean per-frame step speed, m/s
    Vec3 component;      // mean signed per-axis delta * frame rate, m/s
};

/// Mean speed and per-axis mean velocity over a point track.
/// Requires at least 2 frames.
inline VelocityResult velocity(std::span<const Vec3> track, double frame_rate_hz) {
    if (track.size() < 2)
        throw ValidationError("velocity undefined for a track of fewer than 2 frames");
    if (frame_rate_hz <= 0.0)
        throw ValidationError("velocity: frame rate must be positive");
    double path = 0.0;
    for (std::size_t i = 1; i < track.size(); ++i)
        path += (track[i] - track[i - 1]).norm();
    const double steps = static_cast<double>(track.size() - 1);
    VelocityResult r;
    r.speed = path / steps * frame_rate_hz;
    // Signed deltas telescope to (last - first).
    r.component = (track.back() - track.front()) * (frame_rate_hz / steps);
    return r;
}

/// Straight-line displacement between track endpoints, meters.
inline double displacement(std::span<const Vec3> track) {
    if (track.empty())
        throw ValidationError("displacement of an empty track");
    return (track.back() - track.front()).norm();
}

/// Oscillation frequency of a scalar position series in hertz: direction
/// reversals of the smoothed per-frame delta, converted from half-cycles.
/// A motionless or monotone series reports 0 Hz. Requires >= 3 frames.
inline double movement_frequency(std::span<const double> series, double frame_rate_hz) {
    if (series.size() < 3)
        throw ValidationError("movement_frequency needs at least 3 frames");
    if (frame_rate_hz <= 0.0)
        throw ValidationError("movement_frequency: frame rate must be positive");

    const std::size_t m = series.size() - 1;
    std::vector<double> delta(m);
    for (std::size_t i = 0; i < m; ++i) delta[i] = series[i + 1] - series[i];

    // 3-frame centered moving average, clamped at the ends.
    std::vector<double> smooth(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t lo = i == 0 ? 0 : i - 1;
        const std::size_t hi = i + 1 < m ? i + 1 : m - 1;
        double sum = 0.0;
        for (std::size_t k = lo; k <= hi; ++k) sum += delta[k];
        smooth[i] = sum / static_cast<double>(hi - lo + 1);
    }

    double scale = 0.0;
    for (double v : smooth) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) return 0.0;

    const double mean = std::accumulate(smooth.begin(), smooth.end(), 0.0) /
                        static_cast<double>(m);
    // Residuals below the jitter floor are treated as zero so a uniform ramp
    // does not register reversals from rounding noise.
    const double eps = 1e-7 * scale;

    int changes = 0;
    int last_sign = 0;
    for (double v : smooth) {
        const double c = v - mean;
        const int sign = c > eps ? 1 : (c < -eps ? -1 : 0);
        if (sign != 0) {
            if (last_sign != 0 && sign != last_sign) ++changes;
            last_sign = sign;
        }
    }

    const double duration = static_cast<double>(series.size()) / frame_rate_hz;
    return static_cast<double>(changes) / (2.0 * duration);
}

} // namespace emofuse
