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
#include <limits>

#include "emofuse/geometry.hpp"
#include "emofuse/random.hpp"

using namespace emofuse;
using Catch::Approx;

TEST_CASE("pair_distance basics") {
    CHECK(pair_distance({0, 0, 0}, {0, 0, 0}) == 0.0);
    CHECK(pair_distance({0, 0, 0}, {3, 4, 0}) == Approx(5.0));
    // direct formula: sqrt(9 + 16 + 0)
    CHECK(pair_distance({1, 2, 3}, {4, 6, 3}) == Approx(std::sqrt(9.0 + 16.0 + 0.0)));
    CHECK_THROWS_AS(pair_distance({std::numeric_limits<double>::quiet_NaN(), 0, 0}, {0, 0, 0}),
                    ValidationError);
}

TEST_CASE("pair_distance is symmetric and non-negative") {
    rng::Engine eng = rng::make_engine(7);
    for (int i = 0; i < 200; ++i) {
        Vec3 a{rng::uniform_real(eng, -5, 5), rng::uniform_real(eng, -5, 5),
               rng::uniform_real(eng, -5, 5)};
        Vec3 b{rng::uniform_real(eng, -5, 5), rng::uniform_real(eng, -5, 5),
               rng::uniform_real(eng, -5, 5)};
        const double d1 = pair_distance(a, b);
        const double d2 = pair_distance(b, a);
        CHECK(d1 == d2);
        CHECK(d1 >= 0.0);
    }
}

TEST_CASE("pair_angle frontal-plane convention") {
    CHECK(pair_angle({0, 0, 0}, {1, 0, 0}).degrees == Approx(0.0));
    CHECK(pair_angle({0, 0, 0}, {1, 1, 0}).degrees == Approx(45.0));
    // z is ignored: oracle atan2(0, -1) = 180 degrees
    CHECK(pair_angle({0, 0, 0}, {-1, 0, 5}).degrees == Approx(180.0));
    CHECK_FALSE(pair_angle({0, 0, 0}, {-1, 0, 5}).degenerate);

    const AngleResult r = pair_angle({1, 2, 3}, {1, 2, 9});  // same x-y projection
    CHECK(r.degrees == 0.0);
    CHECK(r.degenerate);
}

TEST_CASE("pair_angle range is (-180, 180]") {
    rng::Engine eng = rng::make_engine(11);
    for (int i = 0; i < 200; ++i) {
        Vec3 a{rng::uniform_real(eng, -2, 2), rng::uniform_real(eng, -2, 2), 0};
        Vec3 b{rng::uniform_real(eng, -2, 2), rng::uniform_real(eng, -2, 2), 0};
        const AngleResult r = pair_angle(a, b);
        if (!r.degenerate) {
            CHECK(r.degrees > -180.0);
            CHECK(r.degrees <= 180.0);
        }
    }
}

TEST_CASE("interior_angle of a joint chain") {
    // right angle at the elbow
    CHECK(interior_angle({0, 1, 0}, {0, 0, 0}, {1, 0, 0}).degrees == Approx(90.0));
    // straight limb
    CHECK(interior_angle({-1, 0, 0}, {0, 0, 0}, {1, 0, 0}).degrees == Approx(180.0));
    // folded back
    CHECK(interior_angle({1, 0, 0}, {0, 0, 0}, {1, 0, 0}).degrees == Approx(0.0));
    CHECK(interior_angle({0, 0, 0}, {0, 0, 0}, {1, 0, 0}).degenerate);
}

TEST_CASE("velocity of simple tracks") {
    SECTION("constant track has zero speed") {
        std::vector<Vec3> track(10, Vec3{1, 2, 3});
        const VelocityResult v = velocity(track, 20.0);
        CHECK(v.speed == 0.0);
        CHECK(v.component.x == 0.0);
    }
    SECTION("uniform motion along x at 20 fps") {
        std::vector<Vec3> track;
        for (int i = 0; i < 100; ++i) track.push_back({0.05 * i, 0, 0});
        const VelocityResult v = velocity(track, 20.0);
        CHECK(v.speed == Approx(1.0));
        CHECK(v.component.x == Approx(1.0));
        CHECK(v.component.y == Approx(0.0));
    }
    SECTION("single step oracle") {
        // one step of length 5 at 1 fps
        std::vector<Vec3> track{{0, 0, 0}, {0, 3, 4}};
        CHECK(velocity(track, 1.0).speed == Approx(5.0));
    }
    SECTION("one frame is undefined") {
        std::vector<Vec3> track{{0, 0, 0}};
        CHECK_THROWS_AS(velocity(track, 20.0), ValidationError);
    }
}

TEST_CASE("displacement is endpoint distance") {
    std::vector<Vec3> constant(5, Vec3{2, 2, 2});
    CHECK(displacement(constant) == 0.0);

    // out and back: displacement 0 while speed > 0
    std::vector<Vec3> out_back{{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {1, 0, 0}, {0, 0, 0}};
    CHECK(displacement(out_back) == 0.0);
    CHECK(velocity(out_back, 10.0).speed > 0.0);

    std::vector<Vec3> diag{{0, 0, 0}, {1, 1, 0}, {3, 4, 0}};
    CHECK(displacement(diag) == Approx(5.0));
}

namespace {

// Independent oracle for the sinusoid fixture: sign changes of the sampled
// cosine (the derivative of sin), divided by twice the duration.
double cosine_sign_change_oracle(double hz, std::size_t frames, double rate) {
    int changes = 0;
    int last = 0;
    for (std::size_t i = 0; i + 1 < frames; ++i) {
        const double t = static_cast<double>(i) / rate;
        const double c = std::cos(2.0 * M_PI * hz * t);
        const int sign = c > 0 ? 1 : (c < 0 ? -1 : 0);
        if (sign != 0) {
            if (last != 0 && sign != last) ++changes;
            last = sign;
        }
    }
    const double duration = static_cast<double>(frames) / rate;
    return changes / (2.0 * duration);
}

} // namespace

TEST_CASE("movement_frequency") {
    SECTION("constant and monotone series report 0 Hz") {
        std::vector<double> constant(50, 1.25);
        CHECK(movement_frequency(constant, 20.0) == 0.0);
        std::vector<double> ramp;
        for (int i = 0; i < 50; ++i) ramp.push_back(0.01 * i);
        CHECK(movement_frequency(ramp, 20.0) == 0.0);
    }
    SECTION("1 Hz sinusoid over a 5 s window") {
        std::vector<double> series;
        for (int i = 0; i < 100; ++i)
            series.push_back(std::sin(2.0 * M_PI * 1.0 * i / 20.0));
        const double oracle = cosine_sign_change_oracle(1.0, 100, 20.0);
        CHECK(oracle == Approx(1.0).margin(0.1));
        CHECK(movement_frequency(series, 20.0) == Approx(1.0).margin(0.1));
    }
    SECTION("2 Hz sinusoid") {
        std::vector<double> series;
        for (int i = 0; i < 100; ++i)
            series.push_back(std::sin(2.0 * M_PI * 2.0 * i / 20.0));
        CHECK(movement_frequency(series, 20.0) == Approx(2.0).margin(0.2));
    }
}

TEST_CASE("translation invariance of the geometric quantities") {
    rng::Engine eng = rng::make_engine(3);
    for (int trial = 0; trial < 50; ++trial) {
        const Vec3 offset{rng::uniform_real(eng, -10, 10), rng::uniform_real(eng, -10, 10),
                          rng::uniform_real(eng, -10, 10)};
        std::vector<Vec3> track;
        for (int i = 0; i < 20; ++i)
            track.push_back({rng::uniform_real(eng, -1, 1), rng::uniform_real(eng, -1, 1),
                             rng::uniform_real(eng, -1, 1)});
        std::vector<Vec3> shifted;
        for (const Vec3& p : track) shifted.push_back(p + offset);

        CHECK(pair_distance(track[0], track[1]) ==
              Approx(pair_distance(shifted[0], shifted[1])).epsilon(1e-9));
        CHECK(pair_angle(track[0], track[1]).degrees ==
              Approx(pair_angle(shifted[0], shifted[1]).degrees).margin(1e-9));
        CHECK(velocity(track, 20.0).speed ==
              Approx(velocity(shifted, 20.0).speed).epsilon(1e-9));
        CHECK(displacement(track) == Approx(displacement(shifted)).epsilon(1e-9));
    }
}

TEST_CASE("time reversal preserves speed and displacement, negates components") {
    rng::Engine eng = rng::make_engine(5);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<Vec3> track;
        for (int i = 0; i < 15; ++i)
            track.push_back({rng::uniform_real(eng, -1, 1), rng::uniform_real(eng, -1, 1),
                             rng::uniform_real(eng, -1, 1)});
        std::vector<Vec3> reversed(track.rbegin(), track.rend());

        const VelocityResult fwd = velocity(track, 20.0);
        const VelocityResult rev = velocity(reversed, 20.0);
        CHECK(fwd.speed == Approx(rev.speed).epsilon(1e-12));
        CHECK(fwd.component.x == Approx(-rev.component.x).margin(1e-12));
        CHECK(fwd.component.y == Approx(-rev.component.y).margin(1e-12));
        CHECK(displacement(track) == Approx(displacement(reversed)).epsilon(1e-12));
    }
}
