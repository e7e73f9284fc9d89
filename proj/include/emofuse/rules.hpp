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
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "emofuse/emotion.hpp"
#include "emofuse/features.hpp"

// Threshold-rule decision model. A bundle encodes one pose or action as a
// conjunction of rules over geometric descriptors; its vote enters decision
// fusion as a sixth modality alongside the trained classifiers.

namespace emofuse {

enum class Comparator { within_interval, greater_than, less_than };

inline const char* comparator_name(Comparator c) {
    switch (c) {
        case Comparator::within_interval: return "within_interval";
        case Comparator::greater_than: return "greater_than";
        case Comparator::less_than: return "less_than";
    }
    return "?";
}

inline Comparator comparator_from_name(std::string_view s) {
    if (s == "within_interval") return Comparator::within_interval;
    if (s == "greater_than") return Comparator::greater_than;
    if (s == "less_than") return Comparator::less_than;
    throw ParseError("unknown comparator '" + std::string(s) + "'");
}

/// Calibrated closed interval [lo, hi].
struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const { return v >= lo && v <= hi; }
    bool operator==(const Interval&) const = default;
};

/// One rule: an interval test on a measure, or an ordered comparison of two
/// measures. Interval rules must be calibrated before evaluation.
struct RuleDescriptor {
    std::string id;  // R1..R24 and extensions
    Comparator comparator = Comparator::within_interval;
    FeatureDescriptor measure;
    std::optional<FeatureDescriptor> rhs;   // comparison rules only
    std::optional<Interval> interval;       // interval rules only, after calibration

    bool calibrated() const {
        return comparator != Comparator::within_interval || interval.has_value();
    }

    void check() const {
        measure.check();
        if (comparator == Comparator::within_interval) {
            if (rhs) throw ConfigError("rule " + id + ": interval rule cannot have two measures");
        } else {
            if (!rhs) throw ConfigError("rule " + id + ": comparison rule needs two measures");
            rhs->check();
            if (interval) throw ConfigError("rule " + id + ": comparison rule carries no interval");
        }
        if (interval && interval->lo > interval->hi)
            throw ConfigError("rule " + id + ": interval min exceeds max");
    }
};

/// Emotion-labeled conjunction of rules for one pose or action.
/// min_satisfaction 1.0 means every rule must hold for the bundle to fire.
struct RuleBundle {
    Emotion emotion = Emotion::neutral;
    std::string name;
    double min_satisfaction = 1.0;
    std::vector<RuleDescriptor> rules;

    void check() const {
        if (rules.empty()) throw ConfigError("bundle '" + name + "' has no rules");
        if (min_satisfaction <= 0.0 || min_satisfaction > 1.0)
            throw ConfigError("bundle '" + name + "': min_satisfaction must be in (0, 1]");
        for (const RuleDescriptor& r : rules) r.check();
    }

    /// Descriptors this bundle needs in a feature vector.
    std::vector<FeatureDescriptor> required_descriptors() const {
        std::vector<FeatureDescriptor> out;
        for (const RuleDescriptor& r : rules) {
            out.push_back(r.measure);
            if (r.rhs) out.push_back(*r.rhs);
        }
        return out;
    }
};

struct RuleOutcome {
    bool satisfied = false;
    bool data_gap = false;  // a referenced descriptor was absent
};

/// Evaluates one rule against a feature vector. A missing descriptor makes
/// the rule unsatisfied and flags the gap; calling with an uncalibrated
/// interval rule is a configuration error.
inline RuleOutcome evaluate_rule(const RuleDescriptor& rule, const WindowFeatures& features) {
    if (!rule.calibrated())
        throw ConfigError("rule " + rule.id + " evaluated before calibration");
    const std::optional<double> left = features.value_of(rule.measure.name());
    if (!left) return {false, true};
    switch (rule.comparator) {
        case Comparator::within_interval:
            return {rule.interval->contains(*left), false};
        case Comparator::greater_than:
        case Comparator::less_than: {
            const std::optional<double> right = features.value_of(rule.rhs->name());
            if (!right) return {false, true};
            const bool ok = rule.comparator == Comparator::greater_than ? *left > *right
                                                                        : *left < *right;
            return {ok, false};
        }
    }
    return {false, false};
}

struct BundleOutcome {
    double satisfaction = 0.0;  // satisfied rules / total rules
    bool fired = false;
    int data_gaps = 0;
};

inline BundleOutcome evaluate_bundle(const RuleBundle& bundle, const WindowFeatures& features) {
    int satisfied = 0;
    int gaps = 0;
    for (const RuleDescriptor& r : bundle.rules) {
        const RuleOutcome o = evaluate_rule(r, features);
        if (o.satisfied) ++satisfied;
        if (o.data_gap) ++gaps;
    }
    BundleOutcome out;
    out.satisfaction = static_cast<double>(satisfied) / static_cast<double>(bundle.rules.size());
    out.fired = out.satisfaction >= bundle.min_satisfaction;
    out.data_gaps = gaps;
    return out;
}

/// One vote from the rule model: the best-firing bundle's emotion, or
/// unavailable when nothing fires. Ties go to the higher satisfaction, then
/// the larger rule count (more specific pose), then the lower emotion code.
inline EmotionVote rule_vote(std::span<const RuleBundle> bundles, const WindowFeatures& features) {
    const RuleBundle* best = nullptr;
    double best_sat = -1.0;
    for (const RuleBundle& b : bundles) {
        const BundleOutcome o = evaluate_bundle(b, features);
        if (!o.fired) continue;
        bool wins = false;
        if (!best) {
            wins = true;
        } else if (o.satisfaction != best_sat) {
            wins = o.satisfaction > best_sat;
        } else if (b.rules.size() != best->rules.size()) {
            wins = b.rules.size() > best->rules.size();
        } else {
            wins = emotion_code(b.emotion) < emotion_code(best->emotion);
        }
        if (wins) {
            best = &b;
            best_sat = o.satisfaction;
        }
    }
    if (!best) return std::nullopt;
    return best->emotion;
}

// ---------------------------------------------------------------------------
// Calibration
// ---------------------------------------------------------------------------

/// Exemplar feature vector annotated with the bundle it demonstrates.
struct TaggedFeatures {
    std::string tag;
    WindowFeatures features;
};

/// An interval that collapsed to a point is widened by this absolute floor
/// so it does not have measure zero.
inline constexpr double kDegenerateIntervalFloor = 0.5;

struct CalibrationEntry {
    std::string bundle;
    std::string rule_id;
    double min = 0.0;
    double max = 0.0;
    double margin = 0.0;
    std::size_t exemplar_count = 0;
};

/// Calibrates every interval rule of `bundle` from the exemplars carrying its
/// tag: [min, max] over the observed values, widened symmetrically by
/// margin * span, or by the absolute floor when the interval is degenerate.
inline RuleBundle calibrate_thresholds(const RuleBundle& bundle,
                                       std::span<const TaggedFeatures> exemplars,
                                       double margin = 0.0,
                                       std::vector<CalibrationEntry>* report = nullptr) {
    if (margin < 0.0) throw ConfigError("calibration margin must be >= 0");
    bundle.check();

    std::vector<const WindowFeatures*> own;
    for (const TaggedFeatures& e : exemplars)
        if (e.tag == bundle.name) own.push_back(&e.features);

    RuleBundle out = bundle;
    for (RuleDescriptor& rule : out.rules) {
        if (rule.comparator != Comparator::within_interval) continue;
        if (own.empty())
            throw CalibrationError("bundle '" + bundle.name + "': no exemplars to calibrate rule " +
                                   rule.id);
        double lo = std::numeric_limits<double>::infinity();
        double hi = -std::numeric_limits<double>::infinity();
        const std::string mname = rule.measure.name();
        for (const WindowFeatures* wf : own) {
            const std::optional<double> v = wf->value_of(mname);
            if (!v)
                throw CalibrationError("bundle '" + bundle.name + "', rule " + rule.id +
                                       ": exemplar is missing descriptor '" + mname + "'");
            lo = std::min(lo, *v);
            hi = std::max(hi, *v);
        }
        const double span = hi - lo;
        if (span == 0.0) {
            lo -= kDegenerateIntervalFloor;
            hi += kDegenerateIntervalFloor;
        } else {
            lo -= margin * span;
            hi += margin * span;
        }
        rule.interval = Interval{lo, hi};
        if (report)
            report->push_back({bundle.name, rule.id, lo, hi, margin, own.size()});
    }
    return out;
}

inline std::vector<RuleBundle> calibrate_all(std::span<const RuleBundle> bundles,
                                             std::span<const TaggedFeatures> exemplars,
                                             double margin = 0.0,
                                             std::vector<CalibrationEntry>* report = nullptr) {
    std::vector<RuleBundle> out;
    out.reserve(bundles.size());
    for (const RuleBundle& b : bundles)
        out.push_back(calibrate_thresholds(b, exemplars, margin, report));
    return out;
}

/// True when every exemplar fires its own calibrated bundle. Interval rules
/// hold by construction; comparison rules may expose inconsistent exemplars.
inline bool calibration_consistent(std::span<const RuleBundle> calibrated,
                                   std::span<const TaggedFeatures> exemplars) {
    for (const TaggedFeatures& e : exemplars)
        for (const RuleBundle& b : calibrated)
            if (b.name == e.tag && !evaluate_bundle(b, e.features).fired) return false;
    return true;
}

inline void write_calibration_report(std::ostream& os,
                                     std::span<const CalibrationEntry> entries,
                                     std::span<const std::string> preamble = {}) {
    for (const std::string& p : preamble) os << "# " << p << "\n";
    os << "bundle,rule_id,min,max,margin,exemplar_count\n";
    for (const CalibrationEntry& e : entries)
        os << e.bundle << ',' << e.rule_id << ',' << csv::format_double(e.min) << ','
           << csv::format_double(e.max) << ',' << csv::format_double(e.margin) << ','
           << e.exemplar_count << "\n";
}

// ---------------------------------------------------------------------------
// Bundle files (JSON)
// ---------------------------------------------------------------------------

inline nlohmann::json bundle_to_json(const RuleBundle& b) {
    nlohmann::json j;
    j["emotion"] = emotion_code(b.emotion);
    j["name"] = b.name;
    j["min_satisfaction"] = b.min_satisfaction;
    j["rules"] = nlohmann::json::array();
    for (const RuleDescriptor& r : b.rules) {
        nlohmann::json jr;
        jr["id"] = r.id;
        jr["comparator"] = comparator_name(r.comparator);
        if (r.rhs)
            jr["measure"] = {r.measure.name(), r.rhs->name()};
        else
            jr["measure"] = r.measure.name();
        if (r.interval) {
            jr["min"] = r.interval->lo;
            jr["max"] = r.interval->hi;
        }
        j["rules"].push_back(std::move(jr));
    }
    return j;
}

inline RuleBundle bundle_from_json(const nlohmann::json& j) {
    RuleBundle b;
    b.emotion = emotion_from_code(j.at("emotion").get<int>());
    b.name = j.at("name").get<std::string>();
    b.min_satisfaction = j.value("min_satisfaction", 1.0);
    for (const nlohmann::json& jr : j.at("rules")) {
        RuleDescriptor r;
        r.id = jr.at("id").get<std::string>();
        r.comparator = comparator_from_name(jr.at("comparator").get<std::string>());
        const nlohmann::json& m = jr.at("measure");
        if (m.is_array()) {
            if (m.size() != 2)
                throw ParseError("rule " + r.id + ": measure array needs 2 entries");
            r.measure = FeatureDescriptor::parse(m[0].get<std::string>());
            r.rhs = FeatureDescriptor::parse(m[1].get<std::string>());
        } else {
            r.measure = FeatureDescriptor::parse(m.get<std::string>());
        }
        if (jr.contains("min") && !jr.at("min").is_null()) {
            Interval iv{jr.at("min").get<double>(), jr.at("max").get<double>()};
            r.interval = iv;
        }
        r.check();
        b.rules.push_back(std::move(r));
    }
    b.check();
    return b;
}

inline void save_bundles(std::ostream& os, std::span<const RuleBundle> bundles,
                         const nlohmann::json& meta = nlohmann::json()) {
    nlohmann::json j;
    j["format"] = "emofuse-bundles-v1";
    if (!meta.is_null()) j["meta"] = meta;
    j["bundles"] = nlohmann::json::array();
    for (const RuleBundle& b : bundles) j["bundles"].push_back(bundle_to_json(b));
    os << j.dump(2) << "\n";
}

inline std::vector<RuleBundle> load_bundles(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bundle file: ") + e.what());
    }
    try {
        std::vector<RuleBundle> out;
        for (const nlohmann::json& jb : j.at("bundles")) out.push_back(bundle_from_json(jb));
        return out;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bundle file: ") + e.what());
    }
}

/// Union of descriptors referenced by any bundle, for feature extraction.
inline std::vector<FeatureDescriptor> bundle_descriptors(std::span<const RuleBundle> bundles) {
    std::vector<FeatureDescriptor> out;
    for (const RuleBundle& b : bundles)
        for (const FeatureDescriptor& d : b.required_descriptors()) {
            bool dup = false;
            for (const FeatureDescriptor& have : out)
                if (have == d) { dup = true; break; }
            if (!dup) out.push_back(d);
        }
    return out;
}

} // namespace emofuse
