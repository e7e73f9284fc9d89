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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "emofuse/features.hpp"
#include "helpers.hpp"

using namespace emofuse;
using Catch::Approx;

namespace {

std::size_t choose2(std::size_t p) { return p * (p - 1) / 2; }

SkeletonStream random_stream(const ModalityLayout& layout, std::size_t frames,
                             rng::Engine& eng) {
    return testutil::make_stream(layout, frames, 20.0, [&](std::size_t, std::size_t) {
        return Vec3{rng::uniform_real(eng, -1, 1), rng::uniform_real(eng, -1, 1),
                    rng::uniform_real(eng, -1, 1)};
    });
}

} // namespace

TEST_CASE("descriptor names round trip") {
    const std::vector<std::string> names = {
        "coord:left_wrist:y",
        "dist:left_palm:left_wrist",
        "angle:left_shoulder:right_shoulder",
        "joint_angle:left_shoulder:left_elbow:left_wrist",
        "speed:left_palm",
        "vel:left_palm:x",
        "disp:right_palm",
        "freq:head_00:y",
    };
    for (const std::string& n : names) {
        const FeatureDescriptor d = FeatureDescriptor::parse(n);
        CHECK(d.name() == n);
    }
    CHECK(FeatureDescriptor::parse("dist:a:b").unit() == std::string("m"));
    CHECK(FeatureDescriptor::parse("angle:a:b").unit() == std::string("deg"));
    CHECK(FeatureDescriptor::parse("speed:a").unit() == std::string("m/s"));
    CHECK(FeatureDescriptor::parse("freq:a:x").unit() == std::string("Hz"));

    CHECK_THROWS_AS(FeatureDescriptor::parse("nope:a"), ParseError);
    CHECK_THROWS_AS(FeatureDescriptor::parse("coord:p"), ParseError);      // missing axis
    CHECK_THROWS_AS(FeatureDescriptor::parse("dist:a:a"), ConfigError);    // repeated point
    CHECK_THROWS_AS(FeatureDescriptor::parse("coord:p:w"), ParseError);    // bad axis
}

TEST_CASE("canonical dimension formula") {
    // dimension = 3P + C(P,2) + C(P,2) + P + P
    CHECK(canonical_dimension(1) == 5);
    CHECK(canonical_dimension(8) == 96);
    CHECK(canonical_dimension(12) == 192);
    for (std::size_t p : {std::size_t{1}, std::size_t{2}, std::size_t{8}, std::size_t{12},
                          std::size_t{60}}) {
        const std::size_t oracle = 3 * p + choose2(p) + choose2(p) + p + p;
        CHECK(canonical_dimension(p) == oracle);
    }
    CHECK(canonical_descriptors(ModalityLayout::hand()).size() == 96);
    CHECK(canonical_descriptors(ModalityLayout::head()).size() == 192);
    CHECK(canonical_descriptors(ModalityLayout::body()).size() == 192);
    CHECK(canonical_descriptors(ModalityLayout::make(Modality::hand, {"tip"})).size() == 5);
}

TEST_CASE("extract_window_features on a single-point toy layout") {
    const ModalityLayout toy = ModalityLayout::make(Modality::hand, {"tip"});
    // straight-line motion along x at 1 m/s (20 fps, 0.05 m per frame)
    const SkeletonStream s = testutil::make_stream(
        toy, 100, 20.0, [](std::size_t f, std::size_t) { return Vec3{0.05 * f, 2.0, 3.0}; });
    const std::vector<Window> w = windows(s, 100);
    REQUIRE(w.size() == 1);
    const WindowFeatures wf = extract_window_features(w[0]);
    REQUIRE(wf.size() == 5);

    CHECK(wf.value_of("coord:tip:x").value() == Approx(0.05 * 99));  // final frame
    CHECK(wf.value_of("coord:tip:y").value() == Approx(2.0));
    CHECK(wf.value_of("coord:tip:z").value() == Approx(3.0));
    CHECK(wf.value_of("speed:tip").value() == Approx(1.0));
    CHECK(wf.value_of("disp:tip").value() == Approx(0.05 * 99));
    CHECK_FALSE(wf.value_of("freq:tip:x").has_value());
}

TEST_CASE("extraction order is deterministic and values bit-identical") {
    rng::Engine eng = rng::make_engine(17);
    const SkeletonStream s = random_stream(ModalityLayout::hand(), 120, eng);
    const std::vector<Window> w = windows(s, 100, 10);
    REQUIRE(w.size() >= 2);
    const WindowFeatures a = extract_window_features(w[0]);
    const WindowFeatures b = extract_window_features(w[0]);
    REQUIRE(a.descriptors.size() == b.descriptors.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.descriptors[i] == b.descriptors[i]);
        CHECK(a.values[i] == b.values[i]);  // bit identical
    }
}

TEST_CASE("translation invariance of every non-coordinate feature") {
    rng::Engine eng = rng::make_engine(23);
    const ModalityLayout hand = ModalityLayout::hand();
    for (int trial = 0; trial < 20; ++trial) {
        const SkeletonStream s = random_stream(hand, 100, eng);
        const Vec3 offset{rng::uniform_real(eng, -20, 20), rng::uniform_real(eng, -20, 20),
                          rng::uniform_real(eng, -20, 20)};
        SkeletonStream shifted = s;
        for (SkeletonFrame& f : shifted.frames)
            for (Vec3& p : f.coords) p = p + offset;

        const WindowFeatures a = extract_window_features(windows(s, 100)[0]);
        const WindowFeatures b = extract_window_features(windows(shifted, 100)[0]);
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (a.descriptors[i].kind == FeatureKind::coordinate) continue;
            CHECK(a.values[i] == Approx(b.values[i]).margin(1e-9));
        }
    }
}

TEST_CASE("extra descriptors are appended on request") {
    rng::Engine eng = rng::make_engine(31);
    const SkeletonStream s = random_stream(ModalityLayout::hand(), 100, eng);
    const std::vector<FeatureDescriptor> extras = {
        FeatureDescriptor::parse("joint_angle:left_shoulder:left_elbow:left_wrist"),
        FeatureDescriptor::parse("freq:left_palm:y"),
        FeatureDescriptor::parse("vel:left_palm:x"),
        FeatureDescriptor::parse("coord:left_palm:x"),  // duplicate of a canonical entry
    };
    const WindowFeatures wf = extract_window_features(windows(s, 100)[0], extras);
    CHECK(wf.size() == 96 + 3);  // the canonical duplicate is not repeated
    CHECK(wf.value_of("joint_angle:left_shoulder:left_elbow:left_wrist").has_value());
    CHECK(wf.value_of("freq:left_palm:y").has_value());
}

TEST_CASE("descriptor_value rejects unknown points") {
    rng::Engine eng = rng::make_engine(37);
    const SkeletonStream s = random_stream(ModalityLayout::hand(), 10, eng);
    const Window w = windows(s, 10)[0];
    CHECK_THROWS_AS(descriptor_value(w, FeatureDescriptor::parse("coord:nose:x")),
                    ValidationError);
}

TEST_CASE("feature table CSV round trip") {
    rng::Engine eng = rng::make_engine(41);
    const ModalityLayout toy = ModalityLayout::make(Modality::hand, {"a", "b"});
    const SkeletonStream s = random_stream(toy, 30, eng);

    FeatureTable table;
    table.key_name = "bundle";
    for (const FeatureDescriptor& d : canonical_descriptors(toy))
        table.columns.push_back(d.name());
    for (const Window& w : windows(s, 10)) {
        const WindowFeatures wf = extract_window_features(w);
        table.keys.push_back("pose_a");
        table.rows.push_back(wf.values);
    }

    std::ostringstream os;
    const std::vector<std::string> preamble = {"emofuse test fixture"};
    write_feature_table(os, table, preamble);
    std::istringstream is(os.str());
    const FeatureTable again = read_feature_table(is);

    CHECK(again.key_name == "bundle");
    CHECK(again.columns == table.columns);
    REQUIRE(again.rows.size() == table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r)
        for (std::size_t c = 0; c < table.columns.size(); ++c)
            CHECK(again.rows[r][c] == table.rows[r][c]);  // format_double round-trips
    CHECK(again.keys == table.keys);
}
