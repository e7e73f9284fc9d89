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
#include <cmath>
#include <cstdint>
#include <istream>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "emofuse/emotion.hpp"
#include "emofuse/errors.hpp"
#include "emofuse/random.hpp"

// RBF-kernel support vector classification with a sequential minimal
// optimization solver and a one-vs-one multiclass wrapper. Sized for desk
// scale: the full Gram matrix is precomputed per binary problem.

namespace emofuse {

struct Sample {
    std::vector<double> features;
    int label = 0;  // emotion code 0..6
};

struct KernelParams {
    double c = 1.0;
    double gamma = 0.0;  // <= 0 resolves to 1/dimension at training time

    void check() const {
        if (c <= 0.0) throw ConfigError("svm: C must be positive");
    }
};

inline double rbf_kernel(std::span<const double> x, std::span<const double> z, double gamma) {
    if (x.size() != z.size())
        throw ValidationError("rbf_kernel: dimension mismatch " + std::to_string(x.size()) +
                              " vs " + std::to_string(z.size()));
    double sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - z[i];
        sq += d * d;
    }
    return std::exp(-gamma * sq);
}

struct SmoOptions {
    double tolerance = 1e-3;   // KKT slack
    std::size_t max_passes = 0;  // 0 resolves to 10 * n
    std::uint64_t seed = 1;      // second-choice heuristic start positions
    bool check_objective = false;  // track dual objective monotonicity (slow)
};

struct SmoStats {
    bool converged = true;
    std::size_t passes = 0;
    std::size_t updates = 0;
    std::size_t objective_violations = 0;  // only counted with check_objective
    double alpha_y_sum = 0.0;              // |sum alpha_i y_i| at exit
    double max_kkt_violation = 0.0;
};

struct BinaryModel {
    int negative_label = 0;  // the lower code maps to y = -1
    int positive_label = 0;
    std::vector<std::vector<double>> support_vectors;
    std::vector<double> coefficients;  // alpha_i * y_i per support vector
    double bias = 0.0;
    double gamma = 0.0;
    double c = 0.0;
    SmoStats stats;
};

namespace detail {

/// Working state of one SMO run over a fixed, canonically ordered sample set.
class SmoSolver {
public:
    SmoSolver(std::span<const Sample> samples, double c, double gamma, const SmoOptions& opt)
        : c_(c), gamma_(gamma), opt_(opt), eng_(rng::make_engine(opt.seed)) {
        n_ = samples.size();
        x_.reserve(n_);
        for (const Sample& s : samples) x_.push_back(s.features);
        y_.assign(n_, 0.0);  // filled by caller
        alpha_.assign(n_, 0.0);
        errors_.assign(n_, 0.0);
        gram_.assign(n_ * n_, 0.0);
    }

    void set_label(std::size_t i, double y) { y_[i] = y; }

    SmoStats solve() {
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i; j < n_; ++j) {
                const double k = rbf_kernel(x_[i], x_[j], gamma_);
                gram_[i * n_ + j] = k;
                gram_[j * n_ + i] = k;
            }
        // With all alphas at zero, f(x) = 0 and E_i = -y_i.
        for (std::size_t i = 0; i < n_; ++i) errors_[i] = -y_[i];

        const std::size_t max_passes = opt_.max_passes ? opt_.max_passes : 10 * n_;
        SmoStats stats;
        if (opt_.check_objective) last_objective_ = dual_objective();

        std::size_t num_changed = 0;
        bool examine_all = true;
        while (num_changed > 0 || examine_all) {
            if (stats.passes >= max_passes) {
                stats.converged = false;
                break;
            }
            num_changed = 0;
            if (examine_all) {
                for (std::size_t i = 0; i < n_; ++i) num_changed += examine(i, stats);
            } else {
                for (std::size_t i = 0; i < n_; ++i)
                    if (alpha_[i] > 0.0 && alpha_[i] < c_) num_changed += examine(i, stats);
            }
            if (examine_all)
                examine_all = false;
            else if (num_changed == 0)
                examine_all = true;
            ++stats.passes;
        }

        double ay = 0.0;
        for (std::size_t i = 0; i < n_; ++i) ay += alpha_[i] * y_[i];
        stats.alpha_y_sum = std::fabs(ay);
        for (std::size_t i = 0; i < n_; ++i) {
            const double r = errors_[i] * y_[i];  // y f(x) - 1
            double v = 0.0;
            if (alpha_[i] < 1e-12) v = std::max(0.0, -r);
            else if (alpha_[i] > c_ - 1e-12) v = std::max(0.0, r);
            else v = std::fabs(r);
            stats.max_kkt_violation = std::max(stats.max_kkt_violation, v);
        }
        return stats;
    }

    double alpha(std::size_t i) const { return alpha_[i]; }
    double bias() const { return bias_; }

private:
    std::size_t examine(std::size_t i2, SmoStats& stats) {
        const double y2 = y_[i2];
        const double a2 = alpha_[i2];
        const double e2 = errors_[i2];
        const double r2 = e2 * y2;
        const bool violates = (r2 < -opt_.tolerance && a2 < c_) || (r2 > opt_.tolerance && a2 > 0.0);
        if (!violates) return 0;

        // Second-choice heuristic: largest |E1 - E2| among non-bound points.
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] <= 0.0 || alpha_[i] >= c_) continue;
            const double gap = std::fabs(errors_[i] - e2);
            if (gap > best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (best < n_ && take_step(best, i2, stats)) return 1;

        const std::size_t start = rng::uniform_index(eng_, n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start + k) % n_;
            if (alpha_[i1] <= 0.0 || alpha_[i1] >= c_) continue;
            if (take_step(i1, i2, stats)) return 1;
        }
        const std::size_t start2 = rng::uniform_index(eng_, n_);
        for (std::size_t k = 0; k < n_; ++k) {
            const std::size_t i1 = (start2 + k) % n_;
            if (take_step(i1, i2, stats)) return 1;
        }
        return 0;
    }

    bool take_step(std::size_t i1, std::size_t i2, SmoStats& stats) {
        if (i1 == i2) return false;
        const double a1 = alpha_[i1], a2 = alpha_[i2];
        const double y1 = y_[i1], y2 = y_[i2];
        const double e1 = errors_[i1], e2 = errors_[i2];
        const double s = y1 * y2;

        double lo, hi;
        if (y1 != y2) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(c_, c_ + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - c_);
            hi = std::min(c_, a1 + a2);
        }
        if (lo >= hi) return false;

        const double k11 = gram_[i1 * n_ + i1];
        const double k12 = gram_[i1 * n_ + i2];
        const double k22 = gram_[i2 * n_ + i2];
        const double eta = k11 + k22 - 2.0 * k12;

        double a2new;
        if (eta > 0.0) {
            a2new = a2 + y2 * (e1 - e2) / eta;
            a2new = std::clamp(a2new, lo, hi);
        } else {
            // Flat or concave direction: evaluate the objective at both ends.
            const double f1 = y1 * (e1 + bias_) - a1 * k11 - s * a2 * k12;
            const double f2 = y2 * (e2 + bias_) - s * a1 * k12 - a2 * k22;
            const double l1 = a1 + s * (a2 - lo);
            const double h1 = a1 + s * (a2 - hi);
            const double obj_lo = l1 * f1 + lo * f2 + 0.5 * l1 * l1 * k11 +
                                  0.5 * lo * lo * k22 + s * lo * l1 * k12;
            const double obj_hi = h1 * f1 + hi * f2 + 0.5 * h1 * h1 * k11 +
                                  0.5 * hi * hi * k22 + s * hi * h1 * k12;
            if (obj_lo < obj_hi - kEps) a2new = lo;
            else if (obj_lo > obj_hi + kEps) a2new = hi;
            else return false;
        }
        if (std::fabs(a2new - a2) < kEps * (a2new + a2 + kEps)) return false;

        double a1new = a1 + s * (a2 - a2new);
        // Snap small constraint drift back onto the box.
        if (a1new < 0.0) a1new = 0.0;
        else if (a1new > c_) a1new = c_;

        const double d1 = y1 * (a1new - a1);
        const double d2 = y2 * (a2new - a2);
        const double b1 = bias_ - e1 - d1 * k11 - d2 * k12;
        const double b2 = bias_ - e2 - d1 * k12 - d2 * k22;
        double bnew;
        if (a1new > 0.0 && a1new < c_) bnew = b1;
        else if (a2new > 0.0 && a2new < c_) bnew = b2;
        else bnew = 0.5 * (b1 + b2);

        const double bdelta = bnew - bias_;
        for (std::size_t i = 0; i < n_; ++i)
            errors_[i] += d1 * gram_[i1 * n_ + i] + d2 * gram_[i2 * n_ + i] + bdelta;

        alpha_[i1] = a1new;
        alpha_[i2] = a2new;
        bias_ = bnew;
        ++stats.updates;

        if (opt_.check_objective) {
            const double obj = dual_objective();
            if (obj < last_objective_ - 1e-9) ++stats.objective_violations;
            last_objective_ = obj;
        }
        return true;
    }

    double dual_objective() const {
        double obj = 0.0;
        for (std::size_t i = 0; i < n_; ++i) obj += alpha_[i];
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] == 0.0) continue;
            for (std::size_t j = 0; j < n_; ++j) {
                if (alpha_[j] == 0.0) continue;
                obj -= 0.5 * alpha_[i] * alpha_[j] * y_[i] * y_[j] * gram_[i * n_ + j];
            }
        }
        return obj;
    }

    static constexpr double kEps = 1e-12;

    std::size_t n_ = 0;
    double c_;
    double gamma_;
    SmoOptions opt_;
    rng::Engine eng_;
    std::vector<std::vector<double>> x_;
    std::vector<double> y_;
    std::vector<double> alpha_;
    std::vector<double> errors_;  // E_i = f(x_i) - y_i, kept current
    std::vector<double> gram_;
    double bias_ = 0.0;
    double last_objective_ = 0.0;
};

/// Stable canonical order (label, then lexicographic features) so the trained
/// model does not depend on input permutation.
inline std::vector<Sample> canonical_order(std::span<const Sample> samples) {
    std::vector<Sample> out(samples.begin(), samples.end());
    std::stable_sort(out.begin(), out.end(), [](const Sample& a, const Sample& b) {
        if (a.label != b.label) return a.label < b.label;
        return std::lexicographical_compare(a.features.begin(), a.features.end(),
                                            b.features.begin(), b.features.end());
    });
    return out;
}

} // namespace detail

/// Trains a two-class soft-margin RBF SVM by sequential minimal optimization.
/// The lower of the two label codes becomes the negative side. If the pass
/// budget runs out the best-so-far model is returned with stats.converged
/// false.
inline BinaryModel train_binary_smo(std::span<const Sample> samples, KernelParams params,
                                    SmoOptions options = {}) {
    params.check();
    if (samples.size() < 2) throw ValidationError("svm: need at least 2 samples");
    const std::size_t dim = samples[0].features.size();
    for (const Sample& s : samples) {
        if (s.features.size() != dim)
            throw ValidationError("svm: inconsistent feature dimensions");
        for (double v : s.features)
            if (!std::isfinite(v)) throw ValidationError("svm: non-finite feature value");
    }
    int lo_label = samples[0].label, hi_label = samples[0].label;
    for (const Sample& s : samples) {
        lo_label = std::min(lo_label, s.label);
        hi_label = std::max(hi_label, s.label);
    }
    if (lo_label == hi_label)
        throw ValidationError("svm: binary training needs both labels present");
    for (const Sample& s : samples)
        if (s.label != lo_label && s.label != hi_label)
            throw ValidationError("svm: more than 2 labels in binary training set");

    const double gamma = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(dim);
    const std::vector<Sample> ordered = detail::canonical_order(samples);

    detail::SmoSolver solver(ordered, params.c, gamma, options);
    for (std::size_t i = 0; i < ordered.size(); ++i)
        solver.set_label(i, ordered[i].label == lo_label ? -1.0 : 1.0);
    const SmoStats stats = solver.solve();

    BinaryModel model;
    model.negative_label = lo_label;
    model.positive_label = hi_label;
    model.gamma = gamma;
    model.c = params.c;
    model.bias = solver.bias();
    model.stats = stats;
    for (std::size_t i = 0; i < ordered.size(); ++i) {
        const double a = solver.alpha(i);
        if (a > 1e-12) {
            model.support_vectors.push_back(ordered[i].features);
            model.coefficients.push_back(a * (ordered[i].label == lo_label ? -1.0 : 1.0));
        }
    }
    return model;
}

struct BinaryPrediction {
    double decision = 0.0;
    int label = 0;
};

/// f(x) = sum_i alpha_i y_i K(x_i, x) + b. Sign picks the label; an exact tie
/// goes to the lower label code.
inline BinaryPrediction predict_binary(const BinaryModel& model, std::span<const double> x) {
    double f = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i)
        f += model.coefficients[i] * rbf_kernel(model.support_vectors[i], x, model.gamma);
    BinaryPrediction p;
    p.decision = f;
    p.label = f > 0.0 ? model.positive_label : model.negative_label;
    return p;
}

// ---------------------------------------------------------------------------
// Multiclass (one-vs-one)
// ---------------------------------------------------------------------------

/// Per-dimension z-score parameters fitted on the training split only.
struct StandardScaler {
    std::vector<double> mean;
    std::vector<double> scale;  // standard deviation, 1 where constant

    void fit(std::span<const Sample> samples) {
        const std::size_t dim = samples[0].features.size();
        mean.assign(dim, 0.0);
        scale.assign(dim, 0.0);
        for (const Sample& s : samples)
            for (std::size_t d = 0; d < dim; ++d) mean[d] += s.features[d];
        for (double& m : mean) m /= static_cast<double>(samples.size());
        for (const Sample& s : samples)
            for (std::size_t d = 0; d < dim; ++d) {
                const double dev = s.features[d] - mean[d];
                scale[d] += dev * dev;
            }
        for (double& v : scale) {
            v = std::sqrt(v / static_cast<double>(samples.size()));
            if (v < 1e-12) v = 1.0;
        }
    }

    std::vector<double> transform(std::span<const double> x) const {
        if (x.size() != mean.size())
            throw ValidationError("scaler: dimension mismatch");
        std::vector<double> out(x.size());
        for (std::size_t d = 0; d < x.size(); ++d) out[d] = (x[d] - mean[d]) / scale[d];
        return out;
    }
};

struct MulticlassModel {
    std::vector<int> labels;  // ascending
    StandardScaler scaler;
    double gamma = 0.0;  // resolved value, recorded for reproducibility
    double c = 1.0;
    std::vector<BinaryModel> pair_models;  // (labels[i], labels[j]) for i<j, j inner
    bool all_converged = true;

    std::size_t dimension() const { return scaler.mean.size(); }
};

/// One-vs-one training over all label pairs. Features are standardized with
/// training statistics before kernel evaluation; gamma <= 0 resolves to
/// 1/dimension of the trained vector.
inline MulticlassModel train_multiclass(std::span<const Sample> samples, KernelParams params,
                                        SmoOptions options = {}) {
    params.check();
    if (samples.empty()) throw ValidationError("svm: empty training set");
    for (const Sample& s : samples)
        if (s.label < 0 || s.label >= kEmotionCount)
            throw ValidationError("svm: label out of range 0..6");

    MulticlassModel model;
    for (const Sample& s : samples)
        if (std::find(model.labels.begin(), model.labels.end(), s.label) == model.labels.end())
            model.labels.push_back(s.label);
    std::sort(model.labels.begin(), model.labels.end());
    if (model.labels.size() < 2)
        throw ValidationError("svm: multiclass training needs at least 2 classes");

    model.scaler.fit(samples);
    std::vector<Sample> scaled;
    scaled.reserve(samples.size());
    for (const Sample& s : samples)
        scaled.push_back(Sample{model.scaler.transform(s.features), s.label});

    const std::size_t dim = scaled[0].features.size();
    model.gamma = params.gamma > 0.0 ? params.gamma : 1.0 / static_cast<double>(dim);
    model.c = params.c;

    KernelParams resolved{params.c, model.gamma};
    for (std::size_t i = 0; i < model.labels.size(); ++i)
        for (std::size_t j = i + 1; j < model.labels.size(); ++j) {
            std::vector<Sample> pair;
            for (const Sample& s : scaled)
                if (s.label == model.labels[i] || s.label == model.labels[j])
                    pair.push_back(s);
            BinaryModel bm = train_binary_smo(pair, resolved, options);
            if (!bm.stats.converged) model.all_converged = false;
            model.pair_models.push_back(std::move(bm));
        }
    return model;
}

/// Pairwise-vote majority. Vote ties break on summed |decision value|
/// collected by each label across its contests, then on the lower label code.
inline int predict_multiclass(const MulticlassModel& model, std::span<const double> features) {
    const std::vector<double> x = model.scaler.transform(features);
    std::array<int, kEmotionCount> votes{};
    std::array<double, kEmotionCount> strength{};
    for (const BinaryModel& bm : model.pair_models) {
        const BinaryPrediction p = predict_binary(bm, x);
        votes[p.label] += 1;
        strength[p.label] += std::fabs(p.decision);
    }
    int best = model.labels[0];
    for (int label : model.labels) {
        if (votes[label] != votes[best]) {
            if (votes[label] > votes[best]) best = label;
        } else if (strength[label] != strength[best]) {
            if (strength[label] > strength[best]) best = label;
        }
        // equal votes and strength: keep the lower code (labels are ascending)
    }
    return best;
}

// ---------------------------------------------------------------------------
// Model files (JSON)
// ---------------------------------------------------------------------------

inline void save_model(std::ostream& os, const MulticlassModel& model,
                       const nlohmann::json& meta = nlohmann::json()) {
    nlohmann::json j;
    j["format"] = "emofuse-svm-v1";
    if (!meta.is_null()) j["meta"] = meta;
    j["labels"] = model.labels;
    j["c"] = model.c;
    j["gamma"] = model.gamma;
    j["all_converged"] = model.all_converged;
    j["scaler"] = {{"mean", model.scaler.mean}, {"scale", model.scaler.scale}};
    j["pair_models"] = nlohmann::json::array();
    for (const BinaryModel& bm : model.pair_models) {
        nlohmann::json jb;
        jb["negative_label"] = bm.negative_label;
        jb["positive_label"] = bm.positive_label;
        jb["bias"] = bm.bias;
        jb["support_vectors"] = bm.support_vectors;
        jb["coefficients"] = bm.coefficients;
        j["pair_models"].push_back(std::move(jb));
    }
    os << j.dump() << "\n";
}

inline MulticlassModel load_model(std::istream& is) {
    nlohmann::json j;
    try {
        is >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "emofuse-svm-v1")
            throw ParseError("model file: unsupported format tag");
        MulticlassModel m;
        m.labels = j.at("labels").get<std::vector<int>>();
        m.c = j.at("c").get<double>();
        m.gamma = j.at("gamma").get<double>();
        m.all_converged = j.value("all_converged", true);
        m.scaler.mean = j.at("scaler").at("mean").get<std::vector<double>>();
        m.scaler.scale = j.at("scaler").at("scale").get<std::vector<double>>();
        for (const nlohmann::json& jb : j.at("pair_models")) {
            BinaryModel bm;
            bm.negative_label = jb.at("negative_label").get<int>();
            bm.positive_label = jb.at("positive_label").get<int>();
            bm.bias = jb.at("bias").get<double>();
            bm.support_vectors = jb.at("support_vectors").get<std::vector<std::vector<double>>>();
            bm.coefficients = jb.at("coefficients").get<std::vector<double>>();
            bm.gamma = m.gamma;
            bm.c = m.c;
            m.pair_models.push_back(std::move(bm));
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what());
    }
}

} // namespace emofuse
