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
#include <cmath>
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

namespace emofuse {

/// 7x7 count grid, rows = true label, columns = predicted label.
/// Rows for classes absent from an experiment can be masked; masked rows stay
/// all-zero and are omitted from metrics. No-decision outcomes (unavailable
/// predictions) are tallied separately so they never distort the grid.
class ConfusionMatrix {
public:
    static constexpr int kClasses = kEmotionCount;

    void accumulate(int true_label, EmotionVote predicted) {
        check_label(true_label);
        if (!predicted) {
            ++no_decisions_;
            return;
        }
        counts_[true_label][emotion_code(*predicted)] += 1;
    }

    void merge(const ConfusionMatrix& other) {
        for (int t = 0; t < kClasses; ++t)
            for (int p = 0; p < kClasses; ++p) counts_[t][p] += other.counts_[t][p];
        no_decisions_ += other.no_decisions_;
    }

    std::int64_t at(int t, int p) const {
        check_label(t);
        check_label(p);
        return counts_[t][p];
    }

    std::int64_t row_sum(int t) const {
        std::int64_t s = 0;
        for (int p = 0; p < kClasses; ++p) s += counts_[t][p];
        return s;
    }

    std::int64_t col_sum(int p) const {
        std::int64_t s = 0;
        for (int t = 0; t < kClasses; ++t) s += counts_[t][p];
        return s;
    }

    std::int64_t total() const {
        std::int64_t s = 0;
        for (int t = 0; t < kClasses; ++t) s += row_sum(t);
        return s;
    }

    std::int64_t trace() const {
        std::int64_t s = 0;
        for (int t = 0; t < kClasses; ++t) s += counts_[t][t];
        return s;
    }

    bool masked(int label) const { return masked_[label]; }
    void set_masked(int label, bool m) { masked_[label] = m; }
    std::int64_t no_decisions() const { return no_decisions_; }

    bool operator==(const ConfusionMatrix&) const = default;

    void save_csv(std::ostream& os, std::span<const std::string> preamble = {}) const {
        for (const std::string& p : preamble) os << "# " << p << "\n";
        os << "label,0,1,2,3,4,5,6\n";
        for (int t = 0; t < kClasses; ++t) {
            os << t;
            for (int p = 0; p < kClasses; ++p) {
                if (masked_[t])
                    os << ",-";
                else
                    os << ',' << counts_[t][p];
            }
            os << "\n";
        }
    }

    static ConfusionMatrix load_csv(std::istream& is) {
        ConfusionMatrix m;
        std::string line;
        std::size_t line_no = 0;
        if (!csv::next_row(is, line, line_no)) throw ParseError("empty confusion matrix file");
        if (csv::split(line) != std::vector<std::string>{"label", "0", "1", "2", "3", "4", "5", "6"})
            throw ParseError("bad confusion matrix header", line_no);
        std::array<bool, kClasses> seen{};
        while (csv::next_row(is, line, line_no)) {
            const std::vector<std::string> cells = csv::split(line);
            if (cells.size() != 1 + kClasses)
                throw ParseError("expected 8 columns", line_no);
            const int t = static_cast<int>(csv::to_int(cells[0], line_no));
            check_label(t);
            if (seen[t]) throw ParseError("duplicate row for label " + cells[0], line_no);
            seen[t] = true;
            bool all_dash = true;
            for (int p = 0; p < kClasses; ++p)
                if (cells[1 + p] != "-") all_dash = false;
            if (all_dash) {
                m.masked_[t] = true;
                continue;
            }
            for (int p = 0; p < kClasses; ++p) {
                const std::int64_t v = csv::to_int(cells[1 + p], line_no);
                if (v < 0) throw ValidationError("negative count at line " + std::to_string(line_no));
                m.counts_[t][p] = v;
            }
        }
        for (int t = 0; t < kClasses; ++t)
            if (!seen[t]) m.masked_[t] = true;
        return m;
    }

    static ConfusionMatrix load_csv_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ParseError("cannot open confusion matrix '" + path + "'");
        return load_csv(f);
    }

private:
    static void check_label(int label) {
        if (label < 0 || label >= kClasses)
            throw ValidationError("label out of range 0..6: " + std::to_string(label));
    }

    std::array<std::array<std::int64_t, kClasses>, kClasses> counts_{};
    std::array<bool, kClasses> masked_{};
    std::int64_t no_decisions_ = 0;
};

struct ClassMetrics {
    int label = 0;
    double precision = 0.0;
    double recall = 0.0;
    double f_score = 0.0;
    std::int64_t support = 0;
    bool degenerate = false;  // a zero denominator forced a 0 metric
};

/// Standard per-class precision / recall / F1 over the unmasked classes.
/// Zero denominators yield 0 with the degenerate flag set so reports stay
/// sortable.
inline std::vector<ClassMetrics> precision_recall_f(const ConfusionMatrix& m) {
    std::vector<ClassMetrics> out;
    for (int c = 0; c < ConfusionMatrix::kClasses; ++c) {
        if (m.masked(c)) continue;
        ClassMetrics cm;
        cm.label = c;
        cm.support = m.row_sum(c);
        const std::int64_t tp = m.at(c, c);
        const std::int64_t col = m.col_sum(c);
        const std::int64_t row = m.row_sum(c);
        if (col > 0) cm.precision = static_cast<double>(tp) / static_cast<double>(col);
        else cm.degenerate = true;
        if (row > 0) cm.recall = static_cast<double>(tp) / static_cast<double>(row);
        else cm.degenerate = true;
        if (cm.precision + cm.recall > 0.0)
            cm.f_score = 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall);
        else cm.degenerate = true;
        out.push_back(cm);
    }
    return out;
}

inline double overall_accuracy(const ConfusionMatrix& m) {
    const std::int64_t total = m.total();
    if (total == 0) throw ValidationError("overall_accuracy of an empty matrix");
    return static_cast<double>(m.trace()) / static_cast<double>(total);
}

inline void write_metrics_csv(std::ostream& os, std::span<const ClassMetrics> metrics,
                              std::span<const std::string> preamble = {}) {
    for (const std::string& p : preamble) os << "# " << p << "\n";
    os << "label,precision,recall,f_score,support,degenerate\n";
    for (const ClassMetrics& m : metrics)
        os << m.label << ',' << csv::format_double(m.precision) << ','
           << csv::format_double(m.recall) << ',' << csv::format_double(m.f_score) << ','
           << m.support << ',' << (m.degenerate ? 1 : 0) << "\n";
}

// ---------------------------------------------------------------------------
// Published reference tables and diffing
// ---------------------------------------------------------------------------

/// A transcribed metric table: per-class precision/recall/F plus the table's
/// own accuracy column, which is kept for completeness but never diffed (its
/// definition is not reconstructible from the count grids).
struct ReferenceMetrics {
    struct Row {
        int label = 0;
        double precision = 0.0;
        double recall = 0.0;
        double f_score = 0.0;
        std::optional<double> accuracy;
    };
    std::vector<Row> rows;  // defined classes only, ascending label

    static ReferenceMetrics load_csv(std::istream& is) {
        ReferenceMetrics ref;
        std::string line;
        std::size_t line_no = 0;
        if (!csv::next_row(is, line, line_no)) throw ParseError("empty reference metrics file");
        const std::vector<std::string> header = csv::split(line);
        if (header.size() < 4 || header[0] != "label" || header[1] != "precision" ||
            header[2] != "recall" || header[3] != "f_score")
            throw ParseError("bad reference metrics header", line_no);
        while (csv::next_row(is, line, line_no)) {
            const std::vector<std::string> cells = csv::split(line);
            if (cells.size() != header.size())
                throw ParseError("short row", line_no);
            if (cells[1] == "-") continue;  // undefined class
            Row r;
            r.label = static_cast<int>(csv::to_int(cells[0], line_no));
            r.precision = csv::to_double(cells[1], line_no);
            r.recall = csv::to_double(cells[2], line_no);
            r.f_score = csv::to_double(cells[3], line_no);
            if (cells.size() > 4 && cells[4] != "-") r.accuracy = csv::to_double(cells[4], line_no);
            ref.rows.push_back(r);
        }
        return ref;
    }

    static ReferenceMetrics load_csv_file(const std::string& path) {
        std::ifstream f(path);
        if (!f) throw ParseError("cannot open reference metrics '" + path + "'");
        return load_csv(f);
    }
};

struct MetricDiff {
    int label = 0;
    std::string metric;  // "precision"|"recall"|"f_score"
    double computed = 0.0;
    double reference = 0.0;
    double delta = 0.0;
    bool pass = false;
};

struct DiffReport {
    double tolerance = 0.0;
    std::vector<MetricDiff> cells;
    bool pass = true;
};

/// Cell-by-cell diff against a published table. Class sets must match
/// exactly; a mismatch is a structural error, not a failed diff.
inline DiffReport compare_reports(std::span<const ClassMetrics> computed,
                                  const ReferenceMetrics& reference, double tolerance) {
    std::map<int, const ClassMetrics*> by_label;
    for (const ClassMetrics& m : computed) by_label[m.label] = &m;
    if (by_label.size() != reference.rows.size())
        throw ValidationError("class-set mismatch: computed " + std::to_string(by_label.size()) +
                              " classes, reference " + std::to_string(reference.rows.size()));
    DiffReport report;
    report.tolerance = tolerance;
    for (const ReferenceMetrics::Row& ref : reference.rows) {
        auto it = by_label.find(ref.label);
        if (it == by_label.end())
            throw ValidationError("class-set mismatch: reference class " +
                                  std::to_string(ref.label) + " missing from computed metrics");
        const ClassMetrics& c = *it->second;
        auto add = [&](const char* name, double got, double want) {
            MetricDiff d;
            d.label = ref.label;
            d.metric = name;
            d.computed = got;
            d.reference = want;
            d.delta = std::fabs(got - want);
            d.pass = d.delta <= tolerance;
            if (!d.pass) report.pass = false;
            report.cells.push_back(std::move(d));
        };
        add("precision", c.precision, ref.precision);
        add("recall", c.recall, ref.recall);
        add("f_score", c.f_score, ref.f_score);
    }
    return report;
}

inline void write_diff_csv(std::ostream& os, const DiffReport& report,
                           std::span<const std::string> preamble = {}) {
    for (const std::string& p : preamble) os << "# " << p << "\n";
    os << "label,metric,computed,reference,delta,pass\n";
    for (const MetricDiff& d : report.cells)
        os << d.label << ',' << d.metric << ',' << csv::format_double(d.computed) << ','
           << csv::format_double(d.reference) << ',' << csv::format_double(d.delta) << ','
           << (d.pass ? 1 : 0) << "\n";
}

inline void write_diff_text(std::ostream& os, const DiffReport& report) {
    os << (report.pass ? "PASS" : "FAIL") << " (tolerance " << report.tolerance << ")\n";
    for (const MetricDiff& d : report.cells) {
        if (d.pass) continue;
        os << "  " << emotion_name(emotion_from_code(d.label)) << ' ' << d.metric << ": computed "
           << d.computed << " vs reference " << d.reference << " (delta " << d.delta << ")\n";
    }
}

// ---------------------------------------------------------------------------
// Action -> emotion label mappings
// ---------------------------------------------------------------------------

/// Annotator-agreement mapping from corpus action names to emotion classes.
/// File format: action,emotion,agreement with agreement in [0,1] or '-' for
/// inconclusive actions. Actions below the cutoff or inconclusive are
/// excluded; an action listed with several emotions keeps the one with the
/// highest agreement.
struct LabelMapping {
    struct Entry {
        Emotion emotion = Emotion::neutral;
        double agreement = 0.0;
    };

    double cutoff = 0.6;
    std::map<std::string, Entry> entries;
    std::vector<std::pair<std::string, std::string>> excluded;  // action, reason

    std::optional<Emotion> resolve(const std::string& action) const {
        auto it = entries.find(action);
        if (it == entries.end()) return std::nullopt;
        return it->second.emotion;
    }

    static LabelMapping load_csv(std::istream& is, double cutoff = 0.6) {
        LabelMapping m;
        m.cutoff = cutoff;
        std::string line;
        std::size_t line_no = 0;
        if (!csv::next_row(is, line, line_no)) throw ParseError("empty mapping file");
        if (csv::split(line) != std::vector<std::string>{"action", "emotion", "agreement"})
            throw ParseError("bad mapping header", line_no);

        struct Best {
            std::optional<Entry> entry;
            bool inconclusive = false;
            double best_below_cutoff = 0.0;
        };
        std::map<std::string, Best> seen;
        while (csv::next_row(is, line, line_no)) {
            const std::vector<std::string> cells = csv::split(line);
            if (cells.size() != 3) throw ParseError("expected 3 columns", line_no);
            Best& b = seen[cells[0]];
            if (cells[1] == "Inconclusive" || cells[1] == "inconclusive") {
                b.inconclusive = true;
                continue;
            }
            const std::optional<Emotion> e = emotion_from_name(cells[1]);
            if (!e) throw ParseError("unknown emotion '" + cells[1] + "'", line_no);
            const double agreement = csv::to_double(cells[2], line_no);
            if (agreement < 0.0 || agreement > 1.0)
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": agreement must be in [0,1]");
            if (agreement < cutoff) {
                b.best_below_cutoff = std::max(b.best_below_cutoff, agreement);
                continue;
            }
            if (!b.entry || agreement > b.entry->agreement) b.entry = Entry{*e, agreement};
        }
        for (const auto& [action, best] : seen) {
            if (best.entry) {
                m.entries[action] = *best.entry;
            } else if (best.inconclusive) {
                m.excluded.emplace_back(action, "inconclusive");
            } else {
                m.excluded.emplace_back(action, "below agreement cutoff");
            }
        }
        return m;
    }

    static LabelMapping load_csv_file(const std::string& path, double cutoff = 0.6) {
        std::ifstream f(path);
        if (!f) throw ParseError("cannot open mapping file '" + path + "'");
        return load_csv(f, cutoff);
    }
};

/// Outcome of relabeling a set of action annotations.
struct MappedAnnotations {
    std::vector<std::pair<std::string, Emotion>> labeled;            // action, emotion
    std::vector<std::pair<std::string, std::string>> excluded;       // action, reason
};

inline MappedAnnotations apply_label_mapping(const LabelMapping& mapping,
                                             std::span<const std::string> actions) {
    MappedAnnotations out;
    for (const std::string& action : actions) {
        const std::optional<Emotion> e = mapping.resolve(action);
        if (e) {
            out.labeled.emplace_back(action, *e);
            continue;
        }
        std::string reason = "unknown action";
        for (const auto& [a, r] : mapping.excluded)
            if (a == action) { reason = r; break; }
        out.excluded.emplace_back(action, reason);
    }
    return out;
}

} // namespace emofuse
