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

#include <stdexcept>
#include <string>

namespace emofuse {

/// Malformed input text (bad row, non-numeric cell, unknown token).
/// Carries a 1-based line number when the source is a line-oriented file.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg, std::size_t line = 0)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + msg : msg),
          line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Well-formed input that violates a model invariant (non-finite coordinate,
/// non-increasing timestamps, dimension mismatch, out-of-range label).
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Bad configuration: mapping referencing columns beyond row width,
/// non-positive unit scale, inconsistent rule definitions.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Threshold calibration could not complete (missing descriptor, no exemplars).
class CalibrationError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

} // namespace emofuse
