// Copyright 2026 The selstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <doctest.h>

#include <set>
#include <sstream>

#include "selstream/csv_io.hpp"
#include "selstream/errors.hpp"
#include "selstream/generators.hpp"
#include "selstream/stream.hpp"

using namespace selstream;

TEST_CASE("forward weights decay geometrically and are normalised") {
    const auto p = build_transition_pattern({0, 1, 2}, 0.7, 2, 0.0, 1);
    REQUIRE(p.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(p.matrix[i][i] == 0.0);
        CHECK(p.matrix[i][(i + 1) % 3] == doctest::Approx(0.7 / 1.19).epsilon(1e-12));
        CHECK(p.matrix[i][(i + 2) % 3] == doctest::Approx(0.49 / 1.19).epsilon(1e-12));
    }
}

TEST_CASE("one forward connection between two concepts alternates") {
    const auto p = build_transition_pattern({0, 1}, 0.3, 1, 0.0, 9);
    CHECK(p.matrix[0][0] == 0.0);
    CHECK(p.matrix[0][1] == 1.0);
    CHECK(p.matrix[1][0] == 1.0);
    CHECK(p.matrix[1][1] == 0.0);
    const auto chain = sample_concept_chain(p, 10, 4);
    for (std::size_t i = 1; i < chain.size(); ++i) CHECK(chain[i] != chain[i - 1]);
}

TEST_CASE("full transition noise mixes uniformly") {
    const auto p = build_transition_pattern({0, 1, 2}, 0.7, 2, 1.0, 3);
    for (const auto& row : p.matrix)
        for (double v : row) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("fewer than two concepts is an invalid spec") {
    CHECK_THROWS_AS(build_transition_pattern({0}, 0.7, 2, 0.0, 1), InvalidSpecError);
}

TEST_CASE("two segments of ten give twenty observations and one drift") {
    StreamSpec spec;
    spec.concept_count = 2;
    spec.repetitions = 1;
    spec.segment_length = 10;
    spec.seed = 5;
    const auto s = generate_stream(spec);
    REQUIRE(s.size() == 20);
    std::size_t changes = 0;
    for (std::size_t i = 1; i < s.size(); ++i) changes += *s.observations[i].concept_id != *s.observations[i - 1].concept_id;
    CHECK(changes == 1);
}

TEST_CASE("abrupt streams are piecewise constant with segments - 1 change points") {
    auto spec = dataset_preset("stagger");
    spec.segments = 9;
    spec.segment_length = 500;
    spec.seed = 2;
    const auto s = generate_stream(spec);
    REQUIRE(s.size() == 4500);
    std::size_t changes = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
        const bool changed = *s.observations[i].concept_id != *s.observations[i - 1].concept_id;
        changes += changed;
        if (changed) CHECK(i % 500 == 0);
    }
    CHECK(changes == 8);
}

TEST_CASE("gradual drift labels each observation with its sampled concept") {
    auto spec = dataset_preset("stagger");
    spec.segments = 2;
    spec.segment_length = 2000;
    spec.drift_width = 1000;
    spec.seed = 7;
    const auto s = generate_stream(spec);
    const int first = *s.observations[0].concept_id, second = *s.observations.back().concept_id;
    REQUIRE(first != second);
    std::size_t early = 0, late = 0;
    for (std::size_t i = 2000; i < 2250; ++i) early += *s.observations[i].concept_id == second;
    for (std::size_t i = 2750; i < 3000; ++i) late += *s.observations[i].concept_id == second;
    CHECK(early < late);
    for (std::size_t i = 0; i < 2000; ++i) CHECK(*s.observations[i].concept_id == first);
    for (std::size_t i = 3000; i < 4000; ++i) CHECK(*s.observations[i].concept_id == second);
    // Every labelled observation follows the rule of its own concept.
    for (const auto& o : s.observations)
        CHECK(o.y == stagger_label(*o.concept_id, static_cast<int>(o.x[0]), static_cast<int>(o.x[1]),
                                   static_cast<int>(o.x[2])));
}

TEST_CASE("class noise redraws exactly floor(fraction * n) labels") {
    std::vector<Observation> obs(90000);
    for (std::size_t i = 0; i < obs.size(); ++i) obs[i].t = i;
    const auto same = inject_class_noise(obs, 0.0, 2, 1);
    for (std::size_t i = 0; i < obs.size(); ++i) CHECK(same[i].y == obs[i].y);

    // With a huge label space every redraw is visible.
    const auto wide = inject_class_noise(obs, 0.25, 1 << 30, 1);
    std::size_t changed = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) changed += wide[i].y != obs[i].y;
    CHECK(changed == 22500);

    const auto full = inject_class_noise(obs, 1.0, 2, 3);
    std::size_t flipped = 0;
    for (std::size_t i = 0; i < obs.size(); ++i) flipped += full[i].y != obs[i].y;
    CHECK(flipped > 44000);
    CHECK(flipped < 46000);
}

TEST_CASE("csv round trip preserves the stream") {
    auto spec = dataset_preset("tree");
    spec.segments = 2;
    spec.segment_length = 50;
    const auto s = generate_stream(spec);
    std::stringstream buf;
    write_csv_stream(s, buf);
    const auto r = read_csv_stream(buf);
    REQUIRE(r.size() == s.size());
    CHECK(r.feature_count == s.feature_count);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(r.observations[i].x == s.observations[i].x);
        CHECK(r.observations[i].y == s.observations[i].y);
        CHECK(r.observations[i].concept_id == s.observations[i].concept_id);
    }
}

TEST_CASE("csv edge cases") {
    std::stringstream empty("f0,f1,y,concept\n");
    CHECK(read_csv_stream(empty).size() == 0);

    std::stringstream no_concept("f0,y\n1.5,1\n2,0\n");
    const auto s = read_csv_stream(no_concept);
    CHECK(s.size() == 2);
    CHECK_FALSE(s.has_concepts());

    std::stringstream bad("f0,f1,f2,f3,y\n1,2,3,4,0\n1,2,3,1\n");
    try {
        read_csv_stream(bad);
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 3);
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("same seed gives the same stream") {
    auto spec = dataset_preset("tree");
    spec.segments = 3;
    spec.segment_length = 200;
    spec.seed = 11;
    const auto a = generate_stream(spec), b = generate_stream(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.observations[i].x == b.observations[i].x);
        CHECK(a.observations[i].y == b.observations[i].y);
    }
}

TEST_CASE("stagger preset matches the standard dataset shape") {
    const auto spec = dataset_preset("stagger");
    CHECK(spec.total_length() == 90000);
    CHECK(spec.segment_count() == 18);
}
