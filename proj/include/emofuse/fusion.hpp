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
#include <cstdint>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "emofuse/csv.hpp"
#include "emofuse/emotion.hpp"

// Decision-level fusion: per-modality emotion votes land in an N-instance
// result buffer; a full buffer is tallied and the majority emotion becomes
// the system prediction. The scheme is event based, so modalities on
// different time scales and with missing outputs still combine cleanly.

namespace emofuse {

/// The six vote sources: four tracked-point classifiers, speech, and the
/// rule decision model.
enum class VoteSource { face = 0, head, body, hand, speech, rule };

inline constexpr int kVoteSourceCount = 6;

inline constexpr std::array<const char*, kVoteSourceCount> kVoteSourceNames = {
    "face", "head", "body", "hand", "speech", "rule",
};

inline const char* vote_source_name(VoteSource s) {
    return kVoteSourceNames[static_cast<int>(s)];
}

inline VoteSource vote_source_from_name(std::string_view name, std::size_t line = 0) {
    for (int i = 0; i < kVoteSourceCount; ++i)
        if (name == kVoteSourceNames[i]) return static_cast<VoteSource>(i);
    throw ParseError("unknown vote source '" + std::string(name) + "'", line);
}

struct Vote {
    VoteSource source = VoteSource::face;
    EmotionVote label;          // nullopt = unavailable, recorded as '-'
    std::uint64_t tick = 0;
};

/// One event-aligned slot: at most one vote per modality.
using InstanceColumn = std::array<EmotionVote, kVoteSourceCount>;

struct FusionConfig {
    std::size_t buffer_instances = 10;
    std::array<bool, kVoteSourceCount> enabled{true, true, true, true, true, true};
    bool sliding = false;  // after a prediction: slide by one instead of resetting

    void check() const {
        if (buffer_instances < 1) throw ConfigError("fusion: buffer_instances must be >= 1");
    }

    static FusionConfig with_disabled(std::span<const VoteSource> off,
                                      std::size_t instances = 10) {
        FusionConfig cfg;
        cfg.buffer_instances = instances;
        for (VoteSource s : off) cfg.enabled[static_cast<int>(s)] = false;
        return cfg;
    }
};

struct Decision {
    bool ready = false;      // buffer was full
    EmotionVote label;       // nullopt with ready=true means no-decision
};

/// Single-writer vote buffer. A column closes when a modality votes twice
/// (the duplicate starts the next column) or when the owner signals an
/// instance boundary via close_instance().
class ResultBuffer {
public:
    explicit ResultBuffer(FusionConfig cfg = {}) : cfg_(cfg) { cfg_.check(); }

    const FusionConfig& config() const { return cfg_; }

    /// Records a vote into the open column. Returns false when the vote was
    /// not recorded (disabled source or unavailable label).
    bool push_vote(const Vote& vote) {
        const int src = static_cast<int>(vote.source);
        if (!cfg_.enabled[src]) {
            ++ignored_votes_;
            return false;
        }
        if (!vote.label) return false;  // '-' means the modality had nothing to say
        if (open_ && (*open_)[src]) seal_open();
        if (!open_) open_.emplace();
        (*open_)[src] = vote.label;
        return true;
    }

    bool has_open() const { return open_.has_value(); }

    /// Seals the open column; silent modalities stay unavailable. Opens an
    /// empty column first when none exists, so a timeout tick with no votes
    /// still advances the buffer.
    void close_instance() {
        if (!open_) open_.emplace();
        seal_open();
    }

    std::size_t size() const { return sealed_.size(); }
    bool full() const { return sealed_.size() >= cfg_.buffer_instances; }
    const std::vector<InstanceColumn>& sealed() const { return sealed_; }
    std::size_t ignored_votes() const { return ignored_votes_; }

    /// Vote counts per emotion over all sealed columns.
    std::array<std::int64_t, kEmotionCount> tally() const {
        std::array<std::int64_t, kEmotionCount> t{};
        for (const InstanceColumn& col : sealed_)
            for (const EmotionVote& v : col)
                if (v) t[emotion_code(*v)] += 1;
        return t;
    }

    /// Majority emotion once the buffer is full. Ties go to the label with
    /// more votes in the latest column, then to the lower code. A full buffer
    /// with no votes at all is a no-decision.
    Decision final_prediction() const {
        if (!full()) return {false, std::nullopt};
        const std::array<std::int64_t, kEmotionCount> t = tally();
        std::int64_t max_votes = 0;
        for (std::int64_t v : t) max_votes = std::max(max_votes, v);
        if (max_votes == 0) return {true, std::nullopt};

        std::array<std::int64_t, kEmotionCount> latest{};
        for (const EmotionVote& v : sealed_.back())
            if (v) latest[emotion_code(*v)] += 1;

        int best = -1;
        for (int c = 0; c < kEmotionCount; ++c) {
            if (t[c] != max_votes) continue;
            if (best < 0 || latest[c] > latest[best]) best = c;
        }
        return {true, emotion_from_code(best)};
    }

    /// Advances past a consumed prediction: tumbling mode clears the buffer,
    /// sliding mode drops the oldest column.
    void consume() {
        if (cfg_.sliding) {
            if (!sealed_.empty()) sealed_.erase(sealed_.begin());
        } else {
            sealed_.clear();
        }
    }

private:
    void seal_open() {
        if (sealed_.size() >= cfg_.buffer_instances)
            throw ValidationError("result buffer overflow: consume the prediction first");
        sealed_.push_back(*open_);
        open_.reset();
    }

    FusionConfig cfg_;
    std::vector<InstanceColumn> sealed_;
    std::optional<InstanceColumn> open_;
    std::size_t ignored_votes_ = 0;
};

// ---------------------------------------------------------------------------
// Replay streams
// ---------------------------------------------------------------------------

/// Row of a vote replay file: tick,modality,label[,truth]. Rows sharing a
/// tick form one instance column; the tick boundary closes it.
struct ReplayRow {
    std::uint64_t tick = 0;
    VoteSource source = VoteSource::face;
    EmotionVote label;
    std::optional<int> truth;
};

inline std::vector<ReplayRow> load_vote_stream(std::istream& is) {
    std::vector<ReplayRow> rows;
    std::string line;
    std::size_t line_no = 0;
    if (!csv::next_row(is, line, line_no)) throw ParseError("empty vote stream");
    const std::vector<std::string> header = csv::split(line);
    bool has_truth = false;
    if (header.size() == 4 && header[3] == "truth") has_truth = true;
    else if (header != std::vector<std::string>{"tick", "modality", "label"})
        throw ParseError("bad vote stream header (want tick,modality,label[,truth])", line_no);

    while (csv::next_row(is, line, line_no)) {
        const std::vector<std::string> cells = csv::split(line);
        if (cells.size() != header.size())
            throw ParseError("expected " + std::to_string(header.size()) + " columns", line_no);
        ReplayRow r;
        r.tick = static_cast<std::uint64_t>(csv::to_int(cells[0], line_no));
        r.source = vote_source_from_name(cells[1], line_no);
        r.label = parse_vote_token(cells[2], line_no);
        if (has_truth && cells[3] != "-")
            r.truth = static_cast<int>(csv::to_int(cells[3], line_no));
        rows.push_back(r);
    }
    if (rows.empty()) throw ParseError("vote stream has a header but no rows");
    return rows;
}

inline std::vector<ReplayRow> load_vote_stream_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ParseError("cannot open vote stream '" + path + "'");
    return load_vote_stream(f);
}

struct PredictionRecord {
    std::size_t buffer_index = 0;  // 0-based count of completed buffers
    Decision decision;
    std::array<std::int64_t, kEmotionCount> tally{};
    std::optional<int> truth;      // truth in effect when the buffer filled
};

/// Replays a vote stream through a buffer. Every tick group seals exactly one
/// column (more when a duplicate vote splits it); each time the buffer fills,
/// the prediction is recorded and the buffer advances.
inline std::vector<PredictionRecord> replay(std::span<const ReplayRow> rows,
                                            const FusionConfig& cfg) {
    cfg.check();
    ResultBuffer buffer(cfg);
    std::vector<PredictionRecord> out;
    std::optional<int> current_truth;

    std::size_t i = 0;
    while (i < rows.size()) {
        const std::uint64_t tick = rows[i].tick;
        for (; i < rows.size() && rows[i].tick == tick; ++i) {
            if (rows[i].truth) current_truth = rows[i].truth;
            buffer.push_vote(Vote{rows[i].source, rows[i].label, tick});
            if (buffer.full()) {  // a duplicate vote sealed the Nth column
                PredictionRecord rec{out.size(), buffer.final_prediction(), buffer.tally(),
                                     current_truth};
                out.push_back(rec);
                buffer.consume();
            }
        }
        buffer.close_instance();
        if (buffer.full()) {
            PredictionRecord rec{out.size(), buffer.final_prediction(), buffer.tally(),
                                 current_truth};
            out.push_back(rec);
            buffer.consume();
        }
    }
    return out;
}

/// Accuracy of fused predictions per buffer size. The stream must carry
/// truth labels; a no-decision counts as incorrect.
inline std::map<std::size_t, double> sweep_buffer_size(
    std::span<const ReplayRow> rows, std::span<const std::size_t> sizes,
    const FusionConfig& base = {}) {
    if (rows.empty()) throw ValidationError("sweep: empty vote stream");
    bool any_truth = false;
    for (const ReplayRow& r : rows)
        if (r.truth) { any_truth = true; break; }
    if (!any_truth) throw ValidationError("sweep: vote stream has no truth column");

    std::map<std::size_t, double> out;
    for (std::size_t size : sizes) {
        FusionConfig cfg = base;
        cfg.buffer_instances = size;
        const std::vector<PredictionRecord> preds = replay(rows, cfg);
        if (preds.empty()) {
            out[size] = 0.0;
            continue;
        }
        std::size_t correct = 0;
        for (const PredictionRecord& p : preds)
            if (p.truth && p.decision.label && emotion_code(*p.decision.label) == *p.truth)
                ++correct;
        out[size] = static_cast<double>(correct) / static_cast<double>(preds.size());
    }
    return out;
}

inline void write_prediction_log(std::ostream& os, std::span<const PredictionRecord> records,
                                 std::span<const std::string> preamble = {}) {
    for (const std::string& p : preamble) os << "# " << p << "\n";
    os << "buffer_index,prediction,tally_0,tally_1,tally_2,tally_3,tally_4,tally_5,tally_6\n";
    for (const PredictionRecord& r : records) {
        os << r.buffer_index << ',' << vote_token(r.decision.label);
        for (std::int64_t t : r.tally) os << ',' << t;
        os << "\n";
    }
}

} // namespace emofuse
