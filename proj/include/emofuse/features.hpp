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

#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "emofuse/csv.hpp"
#include "emofuse/geometry.hpp"
#include "emofuse/skeleton.hpp"

namespace emofuse {

enum class Axis { x, y, z };

inline char axis_letter(Axis a) { return a == Axis::x ? 'x' : a == Axis::y ? 'y' : 'z'; }

inline Axis axis_from_letter(std::string_view s) {
    if (s == "x") return Axis::x;
    if (s == "y") return Axis::y;
    if (s == "z") return Axis::z;
    throw ParseError("bad axis '" + std::string(s) + "'");
}

inline double axis_value(const Vec3& v, Axis a) {
    return a == Axis::x ? v.x : a == Axis::y ? v.y : v.z;
}

/// Descriptor kinds. The static pose kinds (coordinate, pair_distance,
/// pair_angle, joint_angle) read the window's final frame; the temporal kinds
/// (velocity, displacement, frequency) read the whole track.
enum class FeatureKind {
    coordinate,     // coord:<p>:<axis>
    pair_distance,  // dist:<a>:<b>
    pair_angle,     // angle:<a>:<b>          angle with the horizontal, x-y plane
    joint_angle,    // joint_angle:<a>:<b>:<c> interior angle at b
    velocity,       // speed:<p>   or vel:<p>:<axis>
    displacement,   // disp:<p>
    frequency,      // freq:<p>:<axis>
};

/// Names a single measured quantity. Point operands are stored by name and
/// resolved against the stream layout at evaluation time, so descriptors can
/// travel in files.
struct FeatureDescriptor {
    FeatureKind kind = FeatureKind::coordinate;
    std::vector<std::string> points;  // 1 (unary), 2 (pair) or 3 (joint chain)
    std::optional<Axis> axis;         // required for coordinate, vel component, frequency

    bool operator==(const FeatureDescriptor&) const = default;

    const char* unit() const {
        switch (kind) {
            case FeatureKind::coordinate:
            case FeatureKind::pair_distance:
            case FeatureKind::displacement: return "m";
            case FeatureKind::pair_angle:
            case FeatureKind::joint_angle: return "deg";
            case FeatureKind::velocity: return "m/s";
            case FeatureKind::frequency: return "Hz";
        }
        return "?";
    }

    /// Canonical colon-separated name, stable across runs; used as the CSV
    /// column header and as the measure syntax in rule files.
    std::string name() const {
        switch (kind) {
            case FeatureKind::coordinate:
                return "coord:" + points[0] + ':' + axis_letter(*axis);
            case FeatureKind::pair_distance:
                return "dist:" + points[0] + ':' + points[1];
            case FeatureKind::pair_angle:
                return "angle:" + points[0] + ':' + points[1];
            case FeatureKind::joint_angle:
                return "joint_angle:" + points[0] + ':' + points[1] + ':' + points[2];
            case FeatureKind::velocity:
                return axis ? "vel:" + points[0] + ':' + axis_letter(*axis)
                            : "speed:" + points[0];
            case FeatureKind::displacement:
                return "disp:" + points[0];
            case FeatureKind::frequency:
                return "freq:" + points[0] + ':' + axis_letter(*axis);
        }
        return "?";
    }

    static FeatureDescriptor parse(std::string_view text) {
        const std::vector<std::string> parts = csv::split(text, ':');
        auto make = [&](FeatureKind k, std::size_t npoints, bool has_axis) {
            if (parts.size() != 1 + npoints + (has_axis ? 1 : 0))
                throw ParseError("malformed descriptor '" + std::string(text) + "'");
            FeatureDescriptor d;
            d.kind = k;
            for (std::size_t i = 0; i < npoints; ++i) d.points.push_back(parts[1 + i]);
            if (has_axis) d.axis = axis_from_letter(parts.back());
            d.check();
            return d;
        };
        if (parts.empty()) throw ParseError("empty descriptor");
        const std::string& tag = parts[0];
        if (tag == "coord") return make(FeatureKind::coordinate, 1, true);
        if (tag == "dist") return make(FeatureKind::pair_distance, 2, false);
        if (tag == "angle") return make(FeatureKind::pair_angle, 2, false);
        if (tag == "joint_angle") return make(FeatureKind::joint_angle, 3, false);
        if (tag == "speed") return make(FeatureKind::velocity, 1, false);
        if (tag == "vel") return make(FeatureKind::velocity, 1, true);
        if (tag == "disp") return make(FeatureKind::displacement, 1, false);
        if (tag == "freq") return make(FeatureKind::frequency, 1, true);
        throw ParseError("unknown descriptor kind '" + tag + "'");
    }

    void check() const {
        const std::size_t n = points.size();
        switch (kind) {
            case FeatureKind::pair_distance:
            case FeatureKind::pair_angle:
                if (n != 2 || points[0] == points[1])
                    throw ConfigError("pair descriptor needs 2 distinct points");
                break;
            case FeatureKind::joint_angle:
                if (n != 3 || points[0] == points[1] || points[1] == points[2] ||
                    points[0] == points[2])
                    throw ConfigError("joint_angle needs 3 distinct points");
                break;
            default:
                if (n != 1) throw ConfigError("unary descriptor needs exactly 1 point");
        }
        const bool needs_axis = kind == FeatureKind::coordinate || kind == FeatureKind::frequency;
        if (needs_axis && !axis) throw ConfigError("descriptor '" + name() + "' needs an axis");
    }
};

/// Feature vector for one analysis window, with the descriptor list that
/// defines the meaning and order of each value.
struct WindowFeatures {
    std::vector<FeatureDescriptor> descriptors;
    std::vector<double> values;

    std::optional<double> value_of(std::string_view descriptor_name) const {
        ensure_index();
        auto it = index_.find(std::string(descriptor_name));
        if (it == index_.end()) return std::nullopt;
        return values[it->second];
    }

    std::size_t size() const { return values.size(); }

private:
    mutable std::unordered_map<std::string, std::size_t> index_;

    void ensure_index() const {
        if (index_.size() == descriptors.size()) return;
        index_.clear();
        for (std::size_t i = 0; i < descriptors.size(); ++i)
            index_.emplace(descriptors[i].name(), i);
    }
};

/// Evaluates one descriptor over a window. Point names are resolved against
/// the window's layout; unknown names raise ValidationError.
inline double descriptor_value(const Window& window, const FeatureDescriptor& desc) {
    const ModalityLayout& layout = window.layout();
    auto resolve = [&](const std::string& name) -> std::size_t {
        const int idx = layout.index_of(name);
        if (idx < 0)
            throw ValidationError("descriptor '" + desc.name() + "': point '" + name +
                                  "' not in the " + modality_name(layout.modality) + " layout");
        return static_cast<std::size_t>(idx);
    };

    switch (desc.kind) {
        case FeatureKind::coordinate:
            return axis_value(window.last_frame().coords[resolve(desc.points[0])], *desc.axis);
        case FeatureKind::pair_distance: {
            const SkeletonFrame& f = window.last_frame();
            return pair_distance(f.coords[resolve(desc.points[0])],
                                 f.coords[resolve(desc.points[1])]);
        }
        case FeatureKind::pair_angle: {
            const SkeletonFrame& f = window.last_frame();
            return pair_angle(f.coords[resolve(desc.points[0])],
                              f.coords[resolve(desc.points[1])]).degrees;
        }
        case FeatureKind::joint_angle: {
            const SkeletonFrame& f = window.last_frame();
            return interior_angle(f.coords[resolve(desc.points[0])],
                                  f.coords[resolve(desc.points[1])],
                                  f.coords[resolve(desc.points[2])]).degrees;
        }
        case FeatureKind::velocity: {
            const VelocityResult v = velocity(window.track(resolve(desc.points[0])),
                                              window.frame_rate());
            return desc.axis ? axis_value(v.component, *desc.axis) : v.speed;
        }
        case FeatureKind::displacement:
            return displacement(window.track(resolve(desc.points[0])));
        case FeatureKind::frequency: {
            const std::vector<Vec3> track = window.track(resolve(desc.points[0]));
            std::vector<double> series;
            series.reserve(track.size());
            for (const Vec3& p : track) series.push_back(axis_value(p, *desc.axis));
            return movement_frequency(series, window.frame_rate());
        }
    }
    throw ValidationError("unhandled descriptor kind");
}

/// The canonical per-window descriptor set for a layout of P points:
/// final-frame coordinates (3P), pairwise distances and horizontal angles
/// (C(P,2) each, i<j order), per-point mean speed (P) and per-point
/// displacement (P). Enumeration order is fixed so vectors are comparable
/// across runs.
inline std::vector<FeatureDescriptor> canonical_descriptors(const ModalityLayout& layout) {
    std::vector<FeatureDescriptor> out;
    const std::size_t p = layout.expected_count();
    out.reserve(3 * p + p * (p - 1) + 2 * p);
    for (const PointId& pt : layout.points)
        for (Axis a : {Axis::x, Axis::y, Axis::z})
            out.push_back({FeatureKind::coordinate, {pt.name}, a});
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
            out.push_back({FeatureKind::pair_distance,
                           {layout.points[i].name, layout.points[j].name},
                           std::nullopt});
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = i + 1; j < p; ++j)
            out.push_back({FeatureKind::pair_angle,
                           {layout.points[i].name, layout.points[j].name},
                           std::nullopt});
    for (const PointId& pt : layout.points)
        out.push_back({FeatureKind::velocity, {pt.name}, std::nullopt});
    for (const PointId& pt : layout.points)
        out.push_back({FeatureKind::displacement, {pt.name}, std::nullopt});
    return out;
}

/// Canonical vector length for a layout of P points:
/// 3P + C(P,2) + C(P,2) + P + P.
inline std::size_t canonical_dimension(std::size_t p) {
    return 3 * p + p * (p - 1) + 2 * p;
}

/// Extracts the canonical vector plus any extra descriptors requested by the
/// rule layer (joint angles, frequencies, velocity components). Extras that
/// duplicate a canonical entry are skipped.
inline WindowFeatures extract_window_features(
    const Window& window, std::span<const FeatureDescriptor> extras = {}) {
    WindowFeatures wf;
    wf.descriptors = canonical_descriptors(window.layout());
    for (const FeatureDescriptor& d : extras) {
        bool dup = false;
        for (const FeatureDescriptor& have : wf.descriptors)
            if (have == d) { dup = true; break; }
        if (!dup) wf.descriptors.push_back(d);
    }
    wf.values.reserve(wf.descriptors.size());
    for (const FeatureDescriptor& d : wf.descriptors)
        wf.values.push_back(descriptor_value(window, d));
    return wf;
}

// ---------------------------------------------------------------------------
// Feature tables (CSV)
// ---------------------------------------------------------------------------

/// Rows of feature vectors sharing one descriptor list. The optional key
/// column carries a bundle tag (calibration exemplars) or a class label
/// (training data), depending on `key_name` ("bundle" / "label" / empty).
struct FeatureTable {
    std::string key_name;               // empty when keyless
    std::vector<std::string> keys;      // per row; empty when keyless
    std::vector<std::string> columns;   // descriptor names
    std::vector<std::vector<double>> rows;

    WindowFeatures features_row(std::size_t r) const {
        WindowFeatures wf;
        wf.descriptors.reserve(columns.size());
        for (const std::string& c : columns)
            wf.descriptors.push_back(FeatureDescriptor::parse(c));
        wf.values = rows[r];
        return wf;
    }
};

inline void write_feature_table(std::ostream& os, const FeatureTable& table,
                                std::span<const std::string> preamble = {}) {
    for (const std::string& p : preamble) os << "# " << p << "\n";
    if (!table.key_name.empty()) os << table.key_name << ",";
    for (std::size_t i = 0; i < table.columns.size(); ++i)
        os << table.columns[i] << (i + 1 < table.columns.size() ? "," : "");
    os << "\n";
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        if (!table.key_name.empty()) os << table.keys[r] << ",";
        const std::vector<double>& row = table.rows[r];
        for (std::size_t i = 0; i < row.size(); ++i)
            os << csv::format_double(row[i]) << (i + 1 < row.size() ? "," : "");
        os << "\n";
    }
}

inline FeatureTable read_feature_table(std::istream& is) {
    FeatureTable table;
    std::string line;
    std::size_t line_no = 0;
    if (!csv::next_row(is, line, line_no)) throw ParseError("empty feature table");

    std::vector<std::string> header = csv::split(line);
    std::size_t first_col = 0;
    if (!header.empty() && (header[0] == "bundle" || header[0] == "label")) {
        table.key_name = header[0];
        first_col = 1;
    }
    for (std::size_t i = first_col; i < header.size(); ++i) {
        FeatureDescriptor::parse(header[i]);  // validates the column name
        table.columns.push_back(header[i]);
    }
    if (table.columns.empty()) throw ParseError("feature table has no descriptor columns");

    while (csv::next_row(is, line, line_no)) {
        const std::vector<std::string> cells = csv::split(line);
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " columns, got " +
                                 std::to_string(cells.size()),
                             line_no);
        if (!table.key_name.empty()) table.keys.push_back(cells[0]);
        std::vector<double> row;
        row.reserve(table.columns.size());
        for (std::size_t i = first_col; i < cells.size(); ++i)
            row.push_back(csv::to_double(cells[i], line_no));
        table.rows.push_back(std::move(row));
    }
    return table;
}

} // namespace emofuse
