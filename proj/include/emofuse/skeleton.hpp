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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "emofuse/errors.hpp"
#include "emofuse/geometry.hpp"

namespace emofuse {

/// One tracked point stream. The fusion layer has two more vote sources
/// (speech and the rule model); those never carry point data.
enum class Modality { face, head, hand, body };

inline const char* modality_name(Modality m) {
    switch (m) {
        case Modality::face: return "face";
        case Modality::head: return "head";
        case Modality::hand: return "hand";
        case Modality::body: return "body";
    }
    return "?";
}

inline Modality modality_from_name(std::string_view name) {
    if (name == "face") return Modality::face;
    if (name == "head") return Modality::head;
    if (name == "hand") return Modality::hand;
    if (name == "body") return Modality::body;
    throw ParseError("unknown modality '" + std::string(name) + "'");
}

struct PointId {
    Modality modality;
    std::string name;
    std::size_t index = 0;

    bool operator==(const PointId&) const = default;
};

/// Ordered point set for one modality. Standard layouts: face 60, head 12,
/// hand 8, body 12 points.
struct ModalityLayout {
    Modality modality = Modality::hand;
    std::vector<PointId> points;

    std::size_t expected_count() const { return points.size(); }

    /// Index of a point by name, or -1.
    int index_of(std::string_view name) const {
        for (std::size_t i = 0; i < points.size(); ++i)
            if (points[i].name == name) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const ModalityLayout&) const = default;

    static ModalityLayout make(Modality m, std::vector<std::string> names) {
        ModalityLayout layout;
        layout.modality = m;
        layout.points.reserve(names.size());
        for (std::size_t i = 0; i < names.size(); ++i) {
            for (std::size_t j = 0; j < i; ++j)
                if (names[j] == names[i])
                    throw ConfigError("layout: duplicate point name '" + names[i] + "'");
            layout.points.push_back({m, std::move(names[i]), i});
        }
        return layout;
    }

    static ModalityLayout face() {
        std::vector<std::string> names;
        names.reserve(60);
        for (int i = 0; i < 60; ++i) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "face_%02d", i);
            names.emplace_back(buf);
        }
        return make(Modality::face, std::move(names));
    }

    static ModalityLayout head() {
        std::vector<std::string> names;
        names.reserve(12);
        for (int i = 0; i < 12; ++i) {
            char buf[16];
            std::snprintf(buf, sizeof(buf), "head_%02d", i);
            names.emplace_back(buf);
        }
        return make(Modality::head, std::move(names));
    }

    /// Shoulder-to-palm chain of both arms.
    static ModalityLayout hand() {
        return make(Modality::hand,
                    {"left_shoulder", "left_elbow", "left_wrist", "left_palm",
                     "right_shoulder", "right_elbow", "right_wrist", "right_palm"});
    }

    /// Trunk and hips plus the arm joints.
    static ModalityLayout body() {
        return make(Modality::body,
                    {"spine_center", "hip_center", "left_hip", "right_hip",
                     "left_shoulder", "left_elbow", "left_wrist", "left_palm",
                     "right_shoulder", "right_elbow", "right_wrist", "right_palm"});
    }

    static ModalityLayout standard(Modality m) {
        switch (m) {
            case Modality::face: return face();
            case Modality::head: return head();
            case Modality::hand: return hand();
            case Modality::body: return body();
        }
        throw ConfigError("no standard layout for modality");
    }
};

struct SkeletonFrame {
    std::size_t frame_index = 0;
    double timestamp = 0.0;          // seconds
    std::vector<Vec3> coords;        // one triple per layout point, meters

    bool operator==(const SkeletonFrame&) const = default;
};

inline constexpr double kDefaultFrameRateHz = 20.0;  // 100 frames per 5 s window

struct SkeletonStream {
    ModalityLayout layout;
    std::vector<SkeletonFrame> frames;
    double frame_rate_hz = kDefaultFrameRateHz;

    bool operator==(const SkeletonStream&) const = default;

    /// Checks every stream invariant; throws ValidationError naming the
    /// first offending frame.
    void validate() const {
        if (!(frame_rate_hz > 0.0) || !std::isfinite(frame_rate_hz))
            throw ValidationError("stream: frame rate must be positive and finite");
        for (std::size_t i = 0; i < frames.size(); ++i) {
            const SkeletonFrame& f = frames[i];
            if (!std::isfinite(f.timestamp) || f.timestamp < 0.0)
                throw ValidationError("frame " + std::to_string(f.frame_index) +
                                      ": timestamp must be finite and >= 0");
            if (f.coords.size() != layout.expected_count())
                throw ValidationError(
                    "frame " + std::to_string(f.frame_index) + ": expected " +
                    std::to_string(layout.expected_count()) + " points, got " +
                    std::to_string(f.coords.size()));
            for (const Vec3& p : f.coords)
                if (!p.finite())
                    throw ValidationError("frame " + std::to_string(f.frame_index) +
                                          ": non-finite coordinate");
            if (i > 0) {
                if (f.frame_index <= frames[i - 1].frame_index)
                    throw ValidationError("frame indices not strictly increasing at frame " +
                                          std::to_string(f.frame_index));
                if (f.timestamp <= frames[i - 1].timestamp)
                    throw ValidationError("timestamps not strictly increasing at frame " +
                                          std::to_string(f.frame_index));
            }
        }
    }
};

/// A contiguous, gap-free slice of a stream. The stream must outlive the
/// window.
struct Window {
    const SkeletonStream* stream = nullptr;
    std::size_t start = 0;    // index into stream->frames
    std::size_t length = 0;

    std::span<const SkeletonFrame> frames() const {
        return std::span<const SkeletonFrame>(stream->frames).subspan(start, length);
    }
    const ModalityLayout& layout() const { return stream->layout; }
    double frame_rate() const { return stream->frame_rate_hz; }
    const SkeletonFrame& last_frame() const { return stream->frames[start + length - 1]; }

    /// Positions of one layout point across the window.
    std::vector<Vec3> track(std::size_t point_index) const {
        std::vector<Vec3> t;
        t.reserve(length);
        for (const SkeletonFrame& f : frames()) t.push_back(f.coords[point_index]);
        return t;
    }
};

/// Slices a stream into analysis windows. stride 0 means tumbling
/// (stride = length). A stream shorter than one window yields an empty list,
/// which is a valid no-data result rather than an error.
inline std::vector<Window> windows(const SkeletonStream& stream,
                                   std::size_t length_frames,
                                   std::size_t stride_frames = 0) {
    if (length_frames == 0)
        throw ValidationError("window length must be positive");
    if (stride_frames == 0) stride_frames = length_frames;
    std::vector<Window> out;
    if (length_frames > stream.frames.size()) return out;
    for (std::size_t s = 0; s + length_frames <= stream.frames.size(); s += stride_frames)
        out.push_back(Window{&stream, s, length_frames});
    return out;
}

} // namespace emofuse
