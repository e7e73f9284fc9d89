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

// emofuse command line: extract features from skeleton streams, calibrate
// rule bundles, train per-modality SVMs, fuse vote streams, and evaluate
// confusion matrices against reference tables.
//
// Exit codes: 0 success, 1 reference-diff failure, 2 input parse failure,
// 3 validation/config failure.

#include <algorithm>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "emofuse/dataset.hpp"
#include "emofuse/eval.hpp"
#include "emofuse/features.hpp"
#include "emofuse/fusion.hpp"
#include "emofuse/rules.hpp"
#include "emofuse/stream_io.hpp"
#include "emofuse/svm.hpp"
#include "emofuse/version.hpp"

namespace fs = std::filesystem;
using namespace emofuse;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDiffFailed = 1;
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string iso_now() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

/// Standard output header: tool version, seed, and a hash of the resolved
/// settings on one line; the timestamp is confined to its own line so
/// reruns differ only there.
std::vector<std::string> preamble(std::uint64_t seed, const std::string& resolved) {
    std::ostringstream id;
    id << "emofuse " << kVersion << " seed=" << seed << " config=" << std::hex
       << fnv1a(resolved);
    return {id.str(), "generated " + iso_now()};
}

std::ofstream open_out(const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    std::ofstream f(dir / name);
    if (!f) throw ConfigError("cannot write to '" + (dir / name).string() + "'");
    return f;
}

/// A --stream argument may be a file or a directory of .csv files.
std::vector<fs::path> collect_inputs(const std::vector<std::string>& args) {
    std::vector<fs::path> files;
    for (const std::string& a : args) {
        const fs::path p(a);
        if (fs::is_directory(p)) {
            for (const auto& entry : fs::directory_iterator(p))
                if (entry.is_regular_file() && entry.path().extension() == ".csv")
                    files.push_back(entry.path());
        } else if (fs::is_regular_file(p)) {
            files.push_back(p);
        } else {
            throw ParseError("input '" + a + "' does not exist");
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) throw ParseError("no input stream files found");
    return files;
}

/// Fills unset CLI options from the JSON config file: first the subcommand
/// section, then the top level. Flags given on the command line win.
class ConfigLayer {
public:
    ConfigLayer(const std::string& path, const std::string& section) : section_(section) {
        if (path.empty()) return;
        std::ifstream f(path);
        if (!f) throw ParseError("cannot open config file '" + path + "'");
        try {
            f >> cfg_;
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("config file: ") + e.what());
        }
    }

    template <typename T>
    void apply(const CLI::Option* opt, const std::string& key, T& value) const {
        if (opt && opt->count() > 0) return;
        const nlohmann::json* found = lookup(key);
        if (!found) return;
        try {
            value = found->get<T>();
        } catch (const nlohmann::json::exception& e) {
            throw ConfigError("config key '" + key + "': " + e.what());
        }
    }

private:
    const nlohmann::json* lookup(const std::string& key) const {
        if (cfg_.contains(section_) && cfg_[section_].contains(key))
            return &cfg_[section_][key];
        if (cfg_.contains(key) && !cfg_[key].is_object()) return &cfg_[key];
        return nullptr;
    }

    nlohmann::json cfg_;
    std::string section_;
};

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

struct ExtractArgs {
    std::vector<std::string> streams;
    std::string modality = "hand";
    std::size_t window = 100;
    std::size_t stride = 0;  // 0 = tumbling
    std::string mapping;
    std::string bundles;
    std::string tag;
    int label = -1;
    std::string out = ".";
};

int cmd_extract(const ExtractArgs& a, std::uint64_t seed, const std::string& resolved) {
    if (!a.tag.empty() && a.label >= 0)
        throw ConfigError("give either --tag or --label, not both");

    const ModalityLayout layout = ModalityLayout::standard(modality_from_name(a.modality));
    const std::vector<fs::path> inputs = collect_inputs(a.streams);

    std::vector<FeatureDescriptor> extras;
    if (!a.bundles.empty()) {
        std::ifstream f(a.bundles);
        if (!f) throw ParseError("cannot open bundle file '" + a.bundles + "'");
        const std::vector<RuleBundle> bundles = load_bundles(f);
        extras = bundle_descriptors(bundles);
    }

    FeatureTable table;
    if (!a.tag.empty()) table.key_name = "bundle";
    if (a.label >= 0) table.key_name = "label";

    std::size_t total_windows = 0;
    for (const fs::path& path : inputs) {
        SkeletonStream stream;
        if (!a.mapping.empty()) {
            const ColumnMapping mapping = ColumnMapping::parse_file(a.mapping, layout);
            stream = adapt_corpus_file(path.string(), mapping, layout);
        } else {
            stream = parse_stream_file(path.string(), layout);
        }
        for (const Window& w : windows(stream, a.window, a.stride)) {
            const WindowFeatures wf = extract_window_features(w, extras);
            if (table.columns.empty())
                for (const FeatureDescriptor& d : wf.descriptors)
                    table.columns.push_back(d.name());
            if (!a.tag.empty()) table.keys.push_back(a.tag);
            if (a.label >= 0) table.keys.push_back(std::to_string(a.label));
            table.rows.push_back(wf.values);
            ++total_windows;
        }
    }
    if (total_windows == 0)
        throw ValidationError("no windows: streams shorter than --window " +
                              std::to_string(a.window));

    std::ofstream out = open_out(a.out, "features.csv");
    const std::vector<std::string> head = preamble(seed, resolved);
    write_feature_table(out, table, head);
    std::cout << "extract: " << total_windows << " windows x " << table.columns.size()
              << " features -> " << (fs::path(a.out) / "features.csv").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// calibrate
// ---------------------------------------------------------------------------

struct CalibrateArgs {
    std::string bundles;
    std::string exemplars;
    double margin = 0.0;
    std::string out = ".";
};

int cmd_calibrate(const CalibrateArgs& a, std::uint64_t seed, const std::string& resolved) {
    std::ifstream bf(a.bundles);
    if (!bf) throw ParseError("cannot open bundle file '" + a.bundles + "'");
    const std::vector<RuleBundle> bundles = load_bundles(bf);

    std::ifstream ef(a.exemplars);
    if (!ef) throw ParseError("cannot open exemplar file '" + a.exemplars + "'");
    const FeatureTable table = read_feature_table(ef);
    if (table.key_name != "bundle")
        throw ValidationError("exemplar file needs a 'bundle' tag column");

    std::vector<TaggedFeatures> exemplars;
    exemplars.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        exemplars.push_back({table.keys[r], table.features_row(r)});

    std::vector<CalibrationEntry> report;
    const std::vector<RuleBundle> calibrated =
        calibrate_all(bundles, exemplars, a.margin, &report);

    std::ofstream bo = open_out(a.out, "bundles_calibrated.json");
    nlohmann::json meta;
    meta["seed"] = seed;
    meta["config"] = fnv1a(resolved);
    save_bundles(bo, calibrated, meta);
    std::ofstream ro = open_out(a.out, "calibration_report.csv");
    write_calibration_report(ro, report, preamble(seed, resolved));

    const bool consistent = calibration_consistent(calibrated, exemplars);
    std::cout << "calibrate: " << report.size() << " intervals over " << bundles.size()
              << " bundles; exemplar consistency " << (consistent ? "ok" : "VIOLATED") << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string features;
    double c = 1.0;
    double gamma = 0.0;
    std::size_t folds = 10;
    std::string out = ".";
};

int cmd_train(const TrainArgs& a, std::uint64_t seed, const std::string& resolved) {
    std::ifstream f(a.features);
    if (!f) throw ParseError("cannot open features file '" + a.features + "'");
    const FeatureTable table = read_feature_table(f);
    if (table.key_name != "label")
        throw ValidationError("training features need a 'label' column");

    std::vector<Sample> samples;
    samples.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        Sample s;
        s.label = static_cast<int>(csv::to_int(table.keys[r]));
        s.features = table.rows[r];
        samples.push_back(std::move(s));
    }

    const KernelParams params{a.c, a.gamma};
    const std::vector<std::string> head = preamble(seed, resolved);

    if (a.folds >= 2) {
        const CvResult cv = cross_validate(samples, params, a.folds, seed);
        std::ofstream co = open_out(a.out, "cv_report.csv");
        for (const std::string& p : head) co << "# " << p << "\n";
        co << "fold,accuracy\n";
        for (std::size_t k = 0; k < cv.fold_accuracy.size(); ++k)
            co << k << ',' << csv::format_double(cv.fold_accuracy[k]) << "\n";
        co << "mean," << csv::format_double(cv.mean_accuracy) << "\n";
        std::ofstream mo = open_out(a.out, "cv_confusion.csv");
        cv.pooled.save_csv(mo, head);
        std::cout << "train: " << a.folds << "-fold mean accuracy "
                  << csv::format_double(cv.mean_accuracy) << "\n";
    }

    const MulticlassModel model = train_multiclass(samples, params);
    std::ofstream out = open_out(a.out, "model.json");
    nlohmann::json meta;
    meta["seed"] = seed;
    meta["config"] = fnv1a(resolved);
    save_model(out, model, meta);
    std::cout << "train: model on " << samples.size() << " samples, " << model.labels.size()
              << " classes, gamma " << csv::format_double(model.gamma)
              << (model.all_converged ? "" : " (convergence warning)") << " -> "
              << (fs::path(a.out) / "model.json").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// fuse
// ---------------------------------------------------------------------------

struct FuseArgs {
    std::string replay;
    std::size_t buffer = 10;
    std::vector<std::string> disable;
    bool sliding = false;
    std::string sweep;
    std::string out = ".";
};

int cmd_fuse(const FuseArgs& a, std::uint64_t seed, const std::string& resolved) {
    const std::vector<ReplayRow> rows = load_vote_stream_file(a.replay);

    FusionConfig cfg;
    cfg.buffer_instances = a.buffer;
    cfg.sliding = a.sliding;
    for (const std::string& name : a.disable)
        cfg.enabled[static_cast<int>(vote_source_from_name(name))] = false;

    const std::vector<std::string> head = preamble(seed, resolved);
    if (!a.sweep.empty()) {
        std::vector<std::size_t> sizes;
        for (const std::string& tok : csv::split(a.sweep))
            sizes.push_back(static_cast<std::size_t>(csv::to_int(tok)));
        const std::map<std::size_t, double> acc = sweep_buffer_size(rows, sizes, cfg);
        std::ofstream so = open_out(a.out, "sweep.csv");
        for (const std::string& p : head) so << "# " << p << "\n";
        so << "buffer_size,accuracy\n";
        for (const auto& [size, value] : acc)
            so << size << ',' << csv::format_double(value) << "\n";
        std::cout << "fuse: swept " << sizes.size() << " buffer sizes -> "
                  << (fs::path(a.out) / "sweep.csv").string() << "\n";
        return kExitOk;
    }

    const std::vector<PredictionRecord> records = replay(rows, cfg);
    std::ofstream po = open_out(a.out, "predictions.csv");
    write_prediction_log(po, records, head);
    std::cout << "fuse: " << records.size() << " predictions";
    if (!records.empty())
        std::cout << ", final " << vote_token(records.back().decision.label);
    std::cout << " -> " << (fs::path(a.out) / "predictions.csv").string() << "\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string matrix;
    std::string reference;
    double tolerance = 0.002;
    std::string mapping;
    std::string annotations;
    double cutoff = 0.6;
    std::string out = ".";
};

int cmd_eval(const EvalArgs& a, std::uint64_t seed, const std::string& resolved) {
    const std::vector<std::string> head = preamble(seed, resolved);

    if (!a.mapping.empty()) {
        if (a.annotations.empty())
            throw ConfigError("--mapping needs --annotations");
        const LabelMapping mapping = LabelMapping::load_csv_file(a.mapping, a.cutoff);

        std::ifstream af(a.annotations);
        if (!af) throw ParseError("cannot open annotations '" + a.annotations + "'");
        std::string line;
        std::size_t line_no = 0;
        if (!csv::next_row(af, line, line_no)) throw ParseError("empty annotations file");
        const std::vector<std::string> header = csv::split(line);
        if (header.size() != 2 || header[0] != "id" || header[1] != "action")
            throw ParseError("annotations header must be id,action");
        std::vector<std::pair<std::string, std::string>> entries;  // id, action
        while (csv::next_row(af, line, line_no)) {
            const std::vector<std::string> cells = csv::split(line);
            if (cells.size() != 2) throw ParseError("expected 2 columns", line_no);
            entries.emplace_back(cells[0], cells[1]);
        }

        std::ofstream lo = open_out(a.out, "labeled.csv");
        for (const std::string& p : head) lo << "# " << p << "\n";
        lo << "id,action,emotion\n";
        std::ofstream xo = open_out(a.out, "exclusions.csv");
        for (const std::string& p : head) xo << "# " << p << "\n";
        xo << "id,action,reason\n";
        std::size_t kept = 0, dropped = 0;
        for (const auto& [id, action] : entries) {
            const std::optional<Emotion> e = mapping.resolve(action);
            if (e) {
                lo << id << ',' << action << ',' << emotion_code(*e) << "\n";
                ++kept;
            } else {
                std::string reason = "unknown action";
                for (const auto& [act, r] : mapping.excluded)
                    if (act == action) { reason = r; break; }
                xo << id << ',' << action << ',' << reason << "\n";
                ++dropped;
            }
        }
        std::cout << "eval: labeled " << kept << ", excluded " << dropped << "\n";
        return kExitOk;
    }

    if (a.matrix.empty()) throw ConfigError("eval needs --matrix or --mapping");
    const ConfusionMatrix m = ConfusionMatrix::load_csv_file(a.matrix);
    const std::vector<ClassMetrics> metrics = precision_recall_f(m);

    std::vector<std::string> mhead = head;
    mhead.push_back("overall_accuracy " + csv::format_double(overall_accuracy(m)));
    std::ofstream mo = open_out(a.out, "metrics.csv");
    write_metrics_csv(mo, metrics, mhead);
    std::cout << "eval: overall accuracy " << csv::format_double(overall_accuracy(m)) << "\n";

    if (a.reference.empty()) return kExitOk;

    const ReferenceMetrics ref = ReferenceMetrics::load_csv_file(a.reference);
    const DiffReport report = compare_reports(metrics, ref, a.tolerance);
    std::ofstream dco = open_out(a.out, "diff.csv");
    write_diff_csv(dco, report, head);
    std::ofstream dto = open_out(a.out, "diff.txt");
    write_diff_text(dto, report);
    write_diff_text(std::cout, report);
    return report.pass ? kExitOk : kExitDiffFailed;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"emofuse: rule-augmented multimodal emotion recognition toolkit"};
    app.require_subcommand(1);

    std::string config_path;
    std::uint64_t seed = 0;
    app.add_option("--config", config_path, "JSON config file (flags win)")->expected(1);
    app.add_option("--seed", seed, "seed recorded in outputs and used for splits");

    ExtractArgs ex;
    CLI::App* extract = app.add_subcommand("extract", "window streams into feature vectors");
    extract->fallthrough();  // --config/--seed may follow the subcommand
    auto* ex_streams = extract->add_option("--stream", ex.streams, "stream file or directory");
    auto* ex_modality = extract->add_option("--modality", ex.modality, "face|head|hand|body");
    auto* ex_window = extract->add_option("--window", ex.window, "window length in frames");
    auto* ex_stride = extract->add_option("--stride", ex.stride, "stride; 0 = tumbling");
    auto* ex_mapping = extract->add_option("--mapping", ex.mapping, "column mapping for corpus files");
    auto* ex_bundles = extract->add_option("--bundles", ex.bundles, "bundle file adding descriptors");
    auto* ex_tag = extract->add_option("--tag", ex.tag, "tag rows with a bundle name");
    auto* ex_label = extract->add_option("--label", ex.label, "label rows with an emotion code");
    auto* ex_out = extract->add_option("--out", ex.out, "output directory");

    CalibrateArgs ca;
    CLI::App* calibrate = app.add_subcommand("calibrate", "fit rule thresholds from exemplars");
    calibrate->fallthrough();  // --config/--seed may follow the subcommand
    auto* ca_bundles = calibrate->add_option("--bundles", ca.bundles, "bundle JSON file");
    auto* ca_exemplars = calibrate->add_option("--exemplars", ca.exemplars, "tagged feature CSV");
    auto* ca_margin = calibrate->add_option("--margin", ca.margin, "fractional interval widening");
    auto* ca_out = calibrate->add_option("--out", ca.out, "output directory");

    TrainArgs tr;
    CLI::App* train = app.add_subcommand("train", "train the multiclass SVM");
    train->fallthrough();  // --config/--seed may follow the subcommand
    auto* tr_features = train->add_option("--features", tr.features, "labeled feature CSV");
    auto* tr_c = train->add_option("--c", tr.c, "soft-margin C");
    auto* tr_gamma = train->add_option("--gamma", tr.gamma, "RBF gamma; 0 = 1/dimension");
    auto* tr_folds = train->add_option("--folds", tr.folds, "cross-validation folds; <2 skips CV");
    auto* tr_out = train->add_option("--out", tr.out, "output directory");

    FuseArgs fu;
    CLI::App* fuse = app.add_subcommand("fuse", "replay votes through the result buffer");
    fuse->fallthrough();  // --config/--seed may follow the subcommand
    auto* fu_replay = fuse->add_option("--replay", fu.replay, "vote stream CSV");
    auto* fu_buffer = fuse->add_option("--buffer", fu.buffer, "result buffer instances");
    auto* fu_disable = fuse->add_option("--disable", fu.disable, "vote source(s) to switch off");
    auto* fu_sliding = fuse->add_flag("--sliding", fu.sliding, "slide instead of tumbling");
    auto* fu_sweep = fuse->add_option("--sweep", fu.sweep, "comma list of buffer sizes");
    auto* fu_out = fuse->add_option("--out", fu.out, "output directory");

    EvalArgs ev;
    CLI::App* eval_cmd = app.add_subcommand("eval", "metrics, reference diffs, label mappings");
    eval_cmd->fallthrough();  // --config/--seed may follow the subcommand
    auto* ev_matrix = eval_cmd->add_option("--matrix", ev.matrix, "confusion matrix CSV");
    auto* ev_reference = eval_cmd->add_option("--reference", ev.reference, "reference metrics CSV");
    auto* ev_tolerance = eval_cmd->add_option("--tolerance", ev.tolerance, "max per-cell delta");
    auto* ev_mapping = eval_cmd->add_option("--mapping", ev.mapping, "action->emotion mapping CSV");
    auto* ev_annotations = eval_cmd->add_option("--annotations", ev.annotations, "id,action CSV");
    auto* ev_cutoff = eval_cmd->add_option("--cutoff", ev.cutoff, "annotator agreement cutoff");
    auto* ev_out = eval_cmd->add_option("--out", ev.out, "output directory");

    try {
        app.parse(argc, argv);

        const std::string section = app.get_subcommands().front()->get_name();
        const ConfigLayer cfg(config_path, section);
        cfg.apply(app.get_option("--seed"), "seed", seed);

        std::ostringstream resolved;
        resolved << section;
        int rc = kExitOk;
        if (*extract) {
            cfg.apply(ex_streams, "stream", ex.streams);
            cfg.apply(ex_modality, "modality", ex.modality);
            cfg.apply(ex_window, "window", ex.window);
            cfg.apply(ex_stride, "stride", ex.stride);
            cfg.apply(ex_mapping, "mapping", ex.mapping);
            cfg.apply(ex_bundles, "bundles", ex.bundles);
            cfg.apply(ex_tag, "tag", ex.tag);
            cfg.apply(ex_label, "label", ex.label);
            cfg.apply(ex_out, "out", ex.out);
            resolved << " modality=" << ex.modality << " window=" << ex.window
                     << " stride=" << ex.stride << " mapping=" << ex.mapping
                     << " bundles=" << ex.bundles << " tag=" << ex.tag
                     << " label=" << ex.label;
            for (const std::string& s : ex.streams) resolved << " stream=" << s;
            rc = cmd_extract(ex, seed, resolved.str());
        } else if (*calibrate) {
            cfg.apply(ca_bundles, "bundles", ca.bundles);
            cfg.apply(ca_exemplars, "exemplars", ca.exemplars);
            cfg.apply(ca_margin, "margin", ca.margin);
            cfg.apply(ca_out, "out", ca.out);
            resolved << " bundles=" << ca.bundles << " exemplars=" << ca.exemplars
                     << " margin=" << ca.margin;
            rc = cmd_calibrate(ca, seed, resolved.str());
        } else if (*train) {
            cfg.apply(tr_features, "features", tr.features);
            cfg.apply(tr_c, "c", tr.c);
            cfg.apply(tr_gamma, "gamma", tr.gamma);
            cfg.apply(tr_folds, "folds", tr.folds);
            cfg.apply(tr_out, "out", tr.out);
            resolved << " features=" << tr.features << " c=" << tr.c << " gamma=" << tr.gamma
                     << " folds=" << tr.folds;
            rc = cmd_train(tr, seed, resolved.str());
        } else if (*fuse) {
            cfg.apply(fu_replay, "replay", fu.replay);
            cfg.apply(fu_buffer, "buffer", fu.buffer);
            cfg.apply(fu_disable, "disable", fu.disable);
            cfg.apply(fu_sliding, "sliding", fu.sliding);
            cfg.apply(fu_sweep, "sweep", fu.sweep);
            cfg.apply(fu_out, "out", fu.out);
            resolved << " replay=" << fu.replay << " buffer=" << fu.buffer
                     << " sliding=" << fu.sliding << " sweep=" << fu.sweep;
            for (const std::string& d : fu.disable) resolved << " disable=" << d;
            rc = cmd_fuse(fu, seed, resolved.str());
        } else if (*eval_cmd) {
            cfg.apply(ev_matrix, "matrix", ev.matrix);
            cfg.apply(ev_reference, "reference", ev.reference);
            cfg.apply(ev_tolerance, "tolerance", ev.tolerance);
            cfg.apply(ev_mapping, "mapping", ev.mapping);
            cfg.apply(ev_annotations, "annotations", ev.annotations);
            cfg.apply(ev_cutoff, "cutoff", ev.cutoff);
            cfg.apply(ev_out, "out", ev.out);
            resolved << " matrix=" << ev.matrix << " reference=" << ev.reference
                     << " tolerance=" << ev.tolerance << " mapping=" << ev.mapping
                     << " annotations=" << ev.annotations << " cutoff=" << ev.cutoff;
            rc = cmd_eval(ev, seed, resolved.str());
        }
        return rc;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitParse;
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitValidation;
    }
}
