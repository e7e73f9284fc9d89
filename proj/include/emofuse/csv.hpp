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

#include <charconv>
#include <cstdio>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "emofuse/errors.hpp"

// Line-oriented CSV helpers shared by every file format in the toolkit.
// All formats are plain comma-separated UTF-8 with LF line endings, no
// quoting, '.' decimal point, and '#' comment lines.

namespace emofuse::csv {

inline std::string trim(std::string_view s) {
    std::size_t b = 0, e = s.size();
    while (b < e && (s[b] == ' ' || s[b] == '\t' || s[b] == '\r')) ++b;
    while (e > b && (s[e - 1] == ' ' || s[e - 1] == '\t' || s[e - 1] == '\r')) --e;
    return std::string(s.substr(b, e - b));
}

inline std::vector<std::string> split(std::string_view line, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= line.size(); ++i) {
        if (i == line.size() || line[i] == sep) {
            out.push_back(trim(line.substr(start, i - start)));
            start = i + 1;
        }
    }
    return out;
}

/// Splits on whitespace runs; used by corpus adapters where files are
/// space- or tab-delimited.
inline std::vector<std::string> split_whitespace(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(std::string(line.substr(start, i - start)));
    }
    return out;
}

inline double to_double(std::string_view cell, std::size_t line = 0) {
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("non-numeric cell '" + std::string(cell) + "'", line);
    return value;
}

inline long long to_int(std::string_view cell, std::size_t line = 0) {
    long long value = 0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("non-integer cell '" + std::string(cell) + "'", line);
    return value;
}

/// Shortest representation that round-trips the double exactly.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

/// Reads the next meaningful line: skips blank lines and '#' comments.
/// Returns false at end of stream. `line_no` counts physical lines.
inline bool next_row(std::istream& is, std::string& out, std::size_t& line_no) {
    while (std::getline(is, out)) {
        ++line_no;
        std::string t = trim(out);
        if (t.empty() || t[0] == '#') continue;
        out = std::move(t);
        return true;
    }
    return false;
}

} // namespace emofuse::csv
