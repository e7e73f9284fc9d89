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

#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "emofuse/eval.hpp"
#include "emofuse/random.hpp"
#include "emofuse/svm.hpp"

// Deterministic stratified splitting and k-fold cross validation.

namespace emofuse {

struct SplitResult {
    std::vector<Sample> train;
    std::vector<Sample> test;
    std::vector<std::string> warnings;
};

/// Stratified train/test split: the fraction is applied per class with
/// round-half-away rounding. A 1-sample class goes to the training side with
/// a warning. Identical seeds give identical partitions.
inline SplitResult split_train_test(std::span<const Sample> samples, double fraction = 0.8,
                                    std::uint64_t seed = 0) {
    if (fraction <= 0.0 || fraction >= 1.0)
        throw ConfigError("split fraction must be in (0, 1)");
    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < samples.size(); ++i)
        by_label[samples[i].label].push_back(i);

    SplitResult out;
    rng::Engine eng = rng::make_engine(seed);
    for (auto& [label, idx] : by_label) {
        rng::shuffle(idx, eng);
        std::size_t n_train;
        if (idx.size() == 1) {
            n_train = 1;
            out.warnings.push_back("class " + std::to_string(label) +
                                   " has a single sample; placed in train");
        } else {
            n_train = static_cast<std::size_t>(
                std::llround(fraction * static_cast<double>(idx.size())));
            if (n_train > idx.size()) n_train = idx.size();
        }
        for (std::size_t k = 0; k < idx.size(); ++k)
            (k < n_train ? out.train : out.test).push_back(samples[idx[k]]);
    }
    return out;
}

struct CvResult {
    std::vector<double> fold_accuracy;
    double mean_accuracy = 0.0;
    ConfusionMatrix pooled;
};

/// Stratified k-fold cross validation. Folds are assigned with one global
/// round-robin counter walking the classes in label order, so each fold gets
/// an even share and every sample is tested exactly once. The pooled matrix
/// accumulates all test predictions; its row sums equal the class counts.
inline CvResult cross_validate(std::span<const Sample> samples, KernelParams params,
                               std::size_t folds = 10, std::uint64_t seed = 0,
                               SmoOptions options = {}) {
    if (folds < 2) throw ConfigError("cross validation needs at least 2 folds");
    if (folds > samples.size())
        throw ConfigError("more folds (" + std::to_string(folds) + ") than samples (" +
                          std::to_string(samples.size()) + ")");

    std::map<int, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < samples.size(); ++i)
        by_label[samples[i].label].push_back(i);

    std::vector<std::size_t> fold_of(samples.size(), 0);
    rng::Engine eng = rng::make_engine(seed);
    std::size_t counter = 0;
    for (auto& [label, idx] : by_label) {
        rng::shuffle(idx, eng);
        for (std::size_t i : idx) fold_of[i] = counter++ % folds;
    }

    CvResult result;
    for (std::size_t k = 0; k < folds; ++k) {
        std::vector<Sample> train;
        std::vector<const Sample*> test;
        for (std::size_t i = 0; i < samples.size(); ++i) {
            if (fold_of[i] == k) test.push_back(&samples[i]);
            else train.push_back(samples[i]);
        }
        const MulticlassModel model = train_multiclass(train, params, options);
        std::size_t correct = 0;
        for (const Sample* s : test) {
            const int pred = predict_multiclass(model, s->features);
            result.pooled.accumulate(s->label, emotion_from_code(pred));
            if (pred == s->label) ++correct;
        }
        result.fold_accuracy.push_back(test.empty()
                                           ? 0.0
                                           : static_cast<double>(correct) /
                                                 static_cast<double>(test.size()));
    }
    double sum = 0.0;
    for (double a : result.fold_accuracy) sum += a;
    result.mean_accuracy = sum / static_cast<double>(result.fold_accuracy.size());
    return result;
}

} // namespace emofuse
