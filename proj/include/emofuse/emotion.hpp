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

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "emofuse/errors.hpp"

namespace emofuse {

/// Class-label encoding used throughout the pipeline. The integer codes are
/// part of every file format and must not be reordered.
enum class Emotion : int {
    anger    = 0,
    happy    = 1,
    surprise = 2,
    disgust  = 3,
    fear     = 4,
    sad      = 5,
    neutral  = 6,
};

inline constexpr int kEmotionCount = 7;

/// A vote: either one of the seven classes or "unavailable" (written '-').
using EmotionVote = std::optional<Emotion>;

inline constexpr std::array<const char*, kEmotionCount> kEmotionNames = {
    "Anger", "Happy", "Surprise", "Disgust", "Fear", "Sad", "Neutral",
};

inline const char* emotion_name(Emotion e) {
    return kEmotionNames[static_cast<int>(e)];
}

inline int emotion_code(Emotion e) { return static_cast<int>(e); }

inline Emotion emotion_from_code(int code) {
    if (code < 0 || code >= kEmotionCount)
        throw ValidationError("emotion code out of range 0..6: " + std::to_string(code));
    return static_cast<Emotion>(code);
}

inline std::optional<Emotion> emotion_from_name(std::string_view name) {
    auto eq = [](std::string_view a, std::string_view b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (std::tolower(static_cast<unsigned char>(a[i])) !=
                std::tolower(static_cast<unsigned char>(b[i])))
                return false;
        return true;
    };
    for (int i = 0; i < kEmotionCount; ++i)
        if (eq(name, kEmotionNames[i])) return static_cast<Emotion>(i);
    return std::nullopt;
}

/// Token form used in vote and prediction CSVs: "0".."6" or "-".
inline std::string vote_token(EmotionVote v) {
    return v ? std::to_string(emotion_code(*v)) : std::string("-");
}

inline EmotionVote parse_vote_token(std::string_view tok, std::size_t line = 0) {
    if (tok == "-") return std::nullopt;
    if (tok.size() == 1 && tok[0] >= '0' && tok[0] <= '6')
        return static_cast<Emotion>(tok[0] - '0');
    throw ParseError("bad emotion token '" + std::string(tok) + "' (want 0..6 or -)", line);
}

} // namespace emofuse
