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
#include <array>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "emofuse/csv.hpp"
#include "emofuse/skeleton.hpp"

// Canonical skeleton CSV:
//   frame,timestamp,<name>_x,<name>_y,<name>_z,...   (points in layout order)
// one row per frame, '.' decimal point, LF line endings. Corpus files in
// other shapes are brought in through a ColumnMapping.

namespace emofuse {

inline std::string canonical_header(const ModalityLayout& layout) {
    std::string h = "frame,timestamp";
    for (const PointId& p : layout.points) {
        h += "," + p.name + "_x," + p.name + "_y," + p.name + "_z";
    }
    return h;
}

namespace detail {

inline double median_frame_delta(const std::vector<SkeletonFrame>& frames) {
    std::vector<double> deltas;
    deltas.reserve(frames.size() - 1);
    for (std::size_t i = 1; i < frames.size(); ++i)
        deltas.push_back(frames[i].timestamp - frames[i - 1].timestamp);
    std::sort(deltas.begin(), deltas.end());
    const std::size_t n = deltas.size();
    return n % 2 ? deltas[n / 2] : 0.5 * (deltas[n / 2 - 1] + deltas[n / 2]);
}

/// Rate inferred as 1 / median inter-frame delta; single-frame streams keep
/// the 20 Hz default.
inline double infer_frame_rate(const std::vector<SkeletonFrame>& frames) {
    if (frames.size() < 2) return kDefaultFrameRateHz;
    const double d = median_frame_delta(frames);
    if (d <= 0.0) throw ValidationError("cannot infer frame rate: non-increasing timestamps");
    return 1.0 / d;
}

} // namespace detail

/// Parses a canonical skeleton CSV. Malformed rows raise ParseError with the
/// line number; invariant violations (non-finite coordinates, non-increasing
/// timestamps) raise ValidationError.
inline SkeletonStream parse_stream(std::istream& is, const ModalityLayout& layout) {
    SkeletonStream stream;
    stream.layout = layout;

    std::string line;
    std::size_t line_no = 0;
    if (!csv::next_row(is, line, line_no))
        throw ParseError("empty stream file");
    if (line != canonical_header(layout))
        throw ParseError("header does not match the " +
                             std::string(modality_name(layout.modality)) +
                             " layout (expected '" + canonical_header(layout) + "')",
                         line_no);

    const std::size_t want = 2 + 3 * layout.expected_count();
    while (csv::next_row(is, line, line_no)) {
        const std::vector<std::string> cells = csv::split(line);
        if (cells.size() != want)
            throw ParseError("expected " + std::to_string(want) + " columns, got " +
                                 std::to_string(cells.size()),
                             line_no);
        SkeletonFrame frame;
        frame.frame_index = static_cast<std::size_t>(csv::to_int(cells[0], line_no));
        frame.timestamp = csv::to_double(cells[1], line_no);
        frame.coords.reserve(layout.expected_count());
        for (std::size_t p = 0; p < layout.expected_count(); ++p) {
            Vec3 v{csv::to_double(cells[2 + 3 * p], line_no),
                   csv::to_double(cells[3 + 3 * p], line_no),
                   csv::to_double(cells[4 + 3 * p], line_no)};
            if (!v.finite())
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": non-finite coordinate for point '" +
                                      layout.points[p].name + "'");
            frame.coords.push_back(v);
        }
        if (!stream.frames.empty()) {
            if (frame.frame_index <= stream.frames.back().frame_index)
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": frame index not increasing");
            if (frame.timestamp <= stream.frames.back().timestamp)
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": timestamp not increasing");
        }
        stream.frames.push_back(std::move(frame));
    }
    if (stream.frames.empty()) throw ParseError("stream has a header but no frames");

    stream.validate();  // with the 20 Hz default still in place
    stream.frame_rate_hz = detail::infer_frame_rate(stream.frames);
    return stream;
}

inline SkeletonStream parse_stream_file(const std::string& path, const ModalityLayout& layout) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open stream file '" + path + "'");
    return parse_stream(f, layout);
}

inline void serialize_stream(const SkeletonStream& stream, std::ostream& os) {
    os << canonical_header(stream.layout) << "\n";
    for (const SkeletonFrame& f : stream.frames) {
        os << f.frame_index << "," << csv::format_double(f.timestamp);
        for (const Vec3& p : f.coords)
            os << "," << csv::format_double(p.x) << "," << csv::format_double(p.y) << ","
               << csv::format_double(p.z);
        os << "\n";
    }
}

/// Declares how to pull a layout's points out of an external corpus file.
/// Key/value text, one entry per line:
///
///   unit_scale = 0.001          # source units to meters
///   timestamp_column = 0        # or: frame_rate_hz = 30
///   skip_rows = 1
///   point.left_palm = 4,5,6     # x,y,z source column indices (0-based)
struct ColumnMapping {
    double unit_scale = 1.0;
    std::optional<std::size_t> timestamp_column;
    std::optional<double> fixed_rate;
    std::size_t skip_rows = 0;
    std::vector<std::array<std::size_t, 3>> point_columns;  // layout order

    static ColumnMapping parse(std::istream& is, const ModalityLayout& layout) {
        ColumnMapping m;
        m.point_columns.assign(layout.expected_count(), {0, 0, 0});
        std::vector<bool> seen(layout.expected_count(), false);

        std::string line;
        std::size_t line_no = 0;
        while (csv::next_row(is, line, line_no)) {
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw ParseError("expected key = value", line_no);
            const std::string key = csv::trim(line.substr(0, eq));
            const std::string value = csv::trim(line.substr(eq + 1));
            if (key == "unit_scale") {
                m.unit_scale = csv::to_double(value, line_no);
            } else if (key == "timestamp_column") {
                m.timestamp_column = static_cast<std::size_t>(csv::to_int(value, line_no));
            } else if (key == "frame_rate_hz") {
                m.fixed_rate = csv::to_double(value, line_no);
            } else if (key == "skip_rows") {
                m.skip_rows = static_cast<std::size_t>(csv::to_int(value, line_no));
            } else if (key.rfind("point.", 0) == 0) {
                const std::string name = key.substr(6);
                const int idx = layout.index_of(name);
                if (idx < 0)
                    throw ConfigError("mapping names unknown point '" + name + "'");
                const std::vector<std::string> cols = csv::split(value);
                if (cols.size() != 3)
                    throw ParseError("point." + name + " needs 3 column indices", line_no);
                for (int a = 0; a < 3; ++a)
                    m.point_columns[idx][a] =
                        static_cast<std::size_t>(csv::to_int(cols[a], line_no));
                seen[idx] = true;
            } else {
                throw ParseError("unknown mapping key '" + key + "'", line_no);
            }
        }
        for (std::size_t i = 0; i < seen.size(); ++i)
            if (!seen[i])
                throw ConfigError("mapping missing point '" + layout.points[i].name + "'");
        m.check();
        return m;
    }

    static ColumnMapping parse_file(const std::string& path, const ModalityLayout& layout) {
        std::ifstream f(path);
        if (!f) throw ParseError("cannot open mapping file '" + path + "'");
        return parse(f, layout);
    }

    /// Mapping that reads a canonical CSV for the given layout.
    static ColumnMapping identity(const ModalityLayout& layout) {
        ColumnMapping m;
        m.skip_rows = 1;  // canonical header
        m.timestamp_column = 1;
        m.point_columns.reserve(layout.expected_count());
        for (std::size_t i = 0; i < layout.expected_count(); ++i)
            m.point_columns.push_back({2 + 3 * i, 3 + 3 * i, 4 + 3 * i});
        return m;
    }

    void check() const {
        if (unit_scale <= 0.0)
            throw ConfigError("mapping: unit scale must be positive");
        if (timestamp_column && fixed_rate)
            throw ConfigError("mapping: give either timestamp_column or frame_rate_hz, not both");
        if (!timestamp_column && !fixed_rate)
            throw ConfigError("mapping: needs timestamp_column or frame_rate_hz");
        if (fixed_rate && *fixed_rate <= 0.0)
            throw ConfigError("mapping: frame_rate_hz must be positive");
    }
};

/// Re-expresses an external corpus file as a SkeletonStream. Rows split on
/// commas when present, otherwise on whitespace. Frame indices are assigned
/// by row order.
inline SkeletonStream adapt_corpus(std::istream& is, const ColumnMapping& mapping,
                                   const ModalityLayout& layout) {
    mapping.check();
    if (mapping.point_columns.size() != layout.expected_count())
        throw ConfigError("mapping covers " + std::to_string(mapping.point_columns.size()) +
                          " points but layout has " + std::to_string(layout.expected_count()));

    SkeletonStream stream;
    stream.layout = layout;

    std::string line;
    std::size_t line_no = 0;
    std::size_t skipped = 0;
    std::size_t row = 0;
    while (csv::next_row(is, line, line_no)) {
        if (skipped < mapping.skip_rows) {
            ++skipped;
            continue;
        }
        const std::vector<std::string> cells = line.find(',') != std::string::npos
                                                   ? csv::split(line)
                                                   : csv::split_whitespace(line);
        auto cell = [&](std::size_t col) -> const std::string& {
            if (col >= cells.size())
                throw ConfigError("line " + std::to_string(line_no) + ": mapping references column " +
                                  std::to_string(col) + " but row has " +
                                  std::to_string(cells.size()) + " columns");
            return cells[col];
        };

        SkeletonFrame frame;
        frame.frame_index = row;
        frame.timestamp = mapping.timestamp_column
                              ? csv::to_double(cell(*mapping.timestamp_column), line_no)
                              : static_cast<double>(row) / *mapping.fixed_rate;
        frame.coords.reserve(layout.expected_count());
        for (const auto& cols : mapping.point_columns) {
            Vec3 v{csv::to_double(cell(cols[0]), line_no) * mapping.unit_scale,
                   csv::to_double(cell(cols[1]), line_no) * mapping.unit_scale,
                   csv::to_double(cell(cols[2]), line_no) * mapping.unit_scale};
            frame.coords.push_back(v);
        }
        stream.frames.push_back(std::move(frame));
        ++row;
    }
    if (stream.frames.empty()) throw ParseError("corpus file has no data rows");

    stream.validate();
    stream.frame_rate_hz = mapping.fixed_rate ? *mapping.fixed_rate
                                              : detail::infer_frame_rate(stream.frames);
    return stream;
}

inline SkeletonStream adapt_corpus_file(const std::string& path, const ColumnMapping& mapping,
                                        const ModalityLayout& layout) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open corpus file '" + path + "'");
    return adapt_corpus(f, mapping, layout);
}

} // namespace emofuse
